"""Functional-description feature structures and a small NP realizer.

A feature structure (FD) is an ordered list of (name, value) pairs where
a value is an atom (string), a nested FD, or a list of FDs (written
``~(...)`` in the text form). Descriptions compile into FDs suitable for
generation; the realizer linearizes the NP-level phenomena this system
produces: appositions, possessives, noun compounds, conjunction lists,
and regular plurals.
"""

from .errors import (FormatError, NotAggregatable, UnparsableDescription,
                     UnrealizableFD, UnsupportedEntityShape)
from .text import Tag, Token


class FD:
    """An ordered feature -> value map; values are atoms, FDs, or FD lists."""

    __slots__ = ("features",)

    def __init__(self, features=()):
        self.features = []
        seen = set()
        for name, value in features:
            if name in seen:
                raise FormatError(f"duplicate feature {name!r}")
            seen.add(name)
            self.features.append((name, value))

    def get(self, name, default=None):
        for fname, value in self.features:
            if fname == name:
                return value
        return default

    def has(self, name) -> bool:
        return any(fname == name for fname, _ in self.features)

    def names(self) -> list[str]:
        return [name for name, _ in self.features]

    def copy(self) -> "FD":
        def cp(value):
            if isinstance(value, FD):
                return value.copy()
            if isinstance(value, list):
                return [m.copy() for m in value]
            return value
        return FD((name, cp(value)) for name, value in self.features)

    def replaced(self, name, value) -> "FD":
        """Copy with one feature replaced (or appended if absent)."""
        out = []
        done = False
        for fname, fvalue in self.copy().features:
            if fname == name:
                out.append((name, value))
                done = True
            else:
                out.append((fname, fvalue))
        if not done:
            out.append((name, value))
        return FD(out)

    def __eq__(self, other):
        if not isinstance(other, FD):
            return NotImplemented
        if set(self.names()) != set(other.names()):
            return False
        for name, value in self.features:
            ovalue = other.get(name)
            if isinstance(value, list) != isinstance(ovalue, list):
                return False
            if isinstance(value, list):
                if len(value) != len(ovalue) or any(a != b for a, b in zip(value, ovalue)):
                    return False
            elif value != ovalue:
                return False
        return True

    def __hash__(self):
        return hash(tuple(sorted(self.names())))

    def __repr__(self):
        return fd_to_text(self)


# --------------------------------------------------------------------------
# Text form

def fd_to_text(fd: FD) -> str:
    """Render an FD in the indented s-expression layout."""
    return _fmt_fd(fd, 0)


def _fmt_fd(fd: FD, col: int) -> str:
    pad = " " * (col + 1)
    feats = []
    for name, value in fd.features:
        head = f"({name} "
        feats.append(head + _fmt_value(name, value, col + 1 + len(head)) + ")")
    return "(" + ("\n" + pad).join(feats) + ")"


def _fmt_value(name, value, col) -> str:
    if isinstance(value, str):
        return f'"{value}"' if name == "lex" else value
    if isinstance(value, FD):
        return _fmt_fd(value, col)
    pad = " " * (col + 2)
    return "~(" + ("\n" + pad).join(_fmt_fd(m, col + 2) for m in value) + ")"


def _lex_sexpr(text: str):
    i = 0
    n = len(text)
    while i < n:
        c = text[i]
        if c.isspace():
            i += 1
        elif c == "~" and i + 1 < n and text[i + 1] == "(":
            yield ("~(", "~(")
            i += 2
        elif c in "()":
            yield (c, c)
            i += 1
        elif c == '"':
            end = text.find('"', i + 1)
            if end < 0:
                raise FormatError("unterminated string")
            yield ("str", text[i + 1:end])
            i = end + 1
        elif text.startswith("``", i):
            end = text.find("''", i + 2)
            if end < 0:
                raise FormatError("unterminated ``...'' string")
            yield ("str", text[i + 2:end])
            i = end + 2
        else:
            j = i
            while j < n and not text[j].isspace() and text[j] not in "()~\"":
                j += 1
            yield ("atom", text[i:j])
            i = j


def parse_fd(text: str) -> FD:
    """Parse the s-expression text form back into an FD."""
    tokens = list(_lex_sexpr(text))
    pos = 0

    def take(expected=None):
        nonlocal pos
        if pos >= len(tokens):
            raise FormatError("unexpected end of FD text")
        kind, value = tokens[pos]
        if expected is not None and kind != expected:
            raise FormatError(f"expected {expected!r}, got {value!r}")
        pos += 1
        return kind, value

    def peek():
        return tokens[pos][0] if pos < len(tokens) else None

    def fd():
        take("(")
        features = []
        while peek() != ")":
            features.append(feature())
        take(")")
        return FD(features)

    def feature():
        take("(")
        kind, name = take()
        if kind != "atom":
            raise FormatError(f"expected feature name, got {name!r}")
        features_value = value(name)
        take(")")
        return (name, features_value)

    def value(name):
        kind = peek()
        if kind == "(":
            return fd()
        if kind == "~(":
            take("~(")
            members = []
            while peek() != ")":
                members.append(fd())
            take(")")
            return members
        kind, text_value = take()
        if kind not in ("atom", "str"):
            raise FormatError(f"bad value for {name!r}")
        return text_value

    result = fd()
    if pos != len(tokens):
        raise FormatError("trailing text after FD")
    return result


# --------------------------------------------------------------------------
# Structural checks

def check_structure(fd: FD) -> None:
    """Validate compiled output: cat at every constituent level (levels
    with features beyond a bare lex), list arity >= 2 under complex, and
    exactly one of head/lex per common level."""
    constituent = [n for n in fd.names() if n not in ("lex", "number")]
    if constituent and not fd.has("cat"):
        raise UnrealizableFD("cat")
    if fd.has("complex"):
        members = fd.get("distinct")
        if not isinstance(members, list) or len(members) < 2:
            raise UnrealizableFD("distinct")
    if fd.get("cat") == "common" and fd.has("head") == fd.has("lex"):
        raise UnrealizableFD("head")
    for _, value in fd.features:
        if isinstance(value, FD):
            check_structure(value)
        elif isinstance(value, list):
            for member in value:
                check_structure(member)


# --------------------------------------------------------------------------
# Compiling descriptions

_PREMOD_TAGS = (Tag.JJ, Tag.NN, Tag.NNS, Tag.NP, Tag.CD)
_HEAD_TAGS = (Tag.NN, Tag.NNS, Tag.NP, Tag.CD)
_PP_PREMOD_TAGS = (Tag.JJ, Tag.NN, Tag.NNS, Tag.NP)
_PP_HEAD_TAGS = (Tag.NN, Tag.NNS, Tag.NP)


def _lex_fd(word: str) -> FD:
    return FD([("lex", word)])


def _fold_compound(words: list[str]) -> FD:
    acc = _lex_fd(words[0])
    for word in words[1:]:
        acc = FD([("cat", "noun-compound"), ("classifier", acc), ("head", _lex_fd(word))])
    return acc


def _parse_core(tokens: list[Token], premod_tags, head_tags, what: str):
    """det / possessor / premodifiers / head split of a flat NP segment."""
    if not tokens:
        raise UnparsableDescription(f"empty {what}")
    pos_idx = next((i for i, t in enumerate(tokens) if t.tag is Tag.POS), None)
    det = None
    possessor = None
    rest = tokens
    if pos_idx is not None:
        if pos_idx == 0 or pos_idx == len(tokens) - 1:
            raise UnparsableDescription("misplaced possessive marker")
        possessor = tokens[:pos_idx]
        rest = tokens[pos_idx + 1:]
        if any(t.tag is Tag.POS for t in rest):
            raise UnparsableDescription("nested possessives are not supported")
    elif tokens[0].tag is Tag.DT:
        det = tokens[0].word
        rest = tokens[1:]
    if not rest:
        raise UnparsableDescription(f"no head in {what}")
    head = rest[-1]
    if head.tag not in head_tags:
        raise UnparsableDescription(f"bad head {head!r} in {what}")
    premods = rest[:-1]
    for t in premods:
        if t.tag not in premod_tags:
            raise UnparsableDescription(f"bad premodifier {t!r} in {what}")
    return det, possessor, premods, head


def _possessor_fd(tokens: list[Token]) -> FD:
    det = "none"
    words = [t.word for t in tokens]
    if tokens[0].tag is Tag.DT:
        det = tokens[0].word
        words = words[1:]
    if not words:
        raise UnparsableDescription("empty possessor")
    return FD([("cat", "common"), ("determiner", det), ("lex", " ".join(words))])


def description_fd(tokens: list[Token]) -> FD:
    """Build the FD of a description noun phrase on its own."""
    tokens = list(tokens)
    if not tokens:
        raise UnparsableDescription("empty description")
    of_idx = next((i for i, t in enumerate(tokens)
                   if t.tag is Tag.IN and t.word.lower() == "of"), None)
    pp_tokens = None
    if of_idx is not None:
        if any(t.tag is Tag.IN for t in tokens[of_idx + 1:]):
            raise UnparsableDescription("more than one prepositional phrase")
        pp_tokens = tokens[of_idx + 1:]
        tokens = tokens[:of_idx]
    det, possessor, premods, head = _parse_core(tokens, _PREMOD_TAGS, _HEAD_TAGS,
                                                "description")
    features = [("cat", "common")]
    if possessor is not None:
        features.append(("possessor", _possessor_fd(possessor)))
    elif det is not None:
        features.append(("determiner", det))
    else:
        features.append(("determiner", "none"))
    if premods:
        features.append(("classifier", _fold_compound([t.word for t in premods])))
    features.append(("head", _lex_fd(head.word)))
    if pp_tokens is not None:
        features.append(("qualifier", _pp_fd(pp_tokens)))
    return FD(features)


def _pp_fd(tokens: list[Token]) -> FD:
    det, possessor, premods, head = _parse_core(tokens, _PP_PREMOD_TAGS, _PP_HEAD_TAGS,
                                                "of-phrase")
    features = [("cat", "common")]
    if possessor is not None:
        features.append(("possessor", _possessor_fd(possessor)))
    elif det is not None:
        features.append(("determiner", det))
    else:
        features.append(("determiner", "none"))
    if premods:
        features.append(("classifier", _fold_compound([t.word for t in premods])))
    features.append(("head", _lex_fd(head.word)))
    return FD([("cat", "pp"), ("prep", "of"), ("np", FD(features))])


def entity_fd(entity: list[Token]) -> FD:
    """Name structure for a 1-3 token proper-noun entity."""
    entity = list(entity)
    if not 1 <= len(entity) <= 3:
        raise UnsupportedEntityShape(f"{len(entity)} tokens")
    if any(t.tag is not Tag.NP for t in entity):
        raise UnsupportedEntityShape("entity tokens must be proper nouns")
    if len(entity) == 1:
        return FD([("cat", "proper"), ("lex", entity[0].word)])
    first = " ".join(t.word for t in entity[:-1])
    return FD([("cat", "person-name"),
               ("first-name", _lex_fd(first)),
               ("last-name", _lex_fd(entity[-1].word))])


def compile_fd(description: list[Token], kind: str, entity: list[Token]) -> FD:
    """Compile an extracted description plus its entity into one FD.

    A single-token premodifier becomes a title classifier on the name;
    everything else becomes a non-restrictive apposition whose distinct
    members are the description FD and the entity FD.
    """
    description = list(description)
    if not description:
        raise UnparsableDescription("empty description")
    ent = entity_fd(entity)
    if kind == "premodifier" and len(description) == 1 \
            and description[0].tag in (Tag.NN, Tag.JJ, Tag.NP):
        return FD([("cat", "np"),
                   ("classifier", _lex_fd(description[0].word)),
                   ("head", ent)])
    return FD([("cat", "np"),
               ("complex", "apposition"),
               ("restrictive", "no"),
               ("distinct", [description_fd(description), ent])])


# --------------------------------------------------------------------------
# Realization

def _pluralize(word: str) -> str:
    if word.endswith(("s", "x", "z", "ch", "sh")):
        return word + "es"
    if word.endswith("y") and len(word) > 1 and word[-2] not in "aeiou":
        return word[:-1] + "ies"
    return word + "s"


def _realize_lex(fd: FD) -> str:
    word = fd.get("lex")
    if fd.get("number") == "plural":
        return _pluralize(word)
    return word


def realize(fd: FD) -> str:
    """Deterministic linearization of an FD into an English string."""
    if fd.has("complex"):
        members = fd.get("distinct")
        if not isinstance(members, list) or not members:
            raise UnrealizableFD("distinct")
        parts = [realize(m) for m in members]
        if fd.get("complex") == "conjunction":
            if len(parts) == 1:
                return parts[0]
            return ", ".join(parts[:-1]) + " and " + parts[-1]
        sep = ", " if fd.get("restrictive") == "no" else " "
        return sep.join(parts)

    cat = fd.get("cat")
    if cat == "person-name":
        names = []
        for feature in ("first-name", "last-name"):
            part = fd.get(feature)
            if part is not None:
                names.append(_realize_lex(part) if part.has("lex") else realize(part))
        if not names:
            raise UnrealizableFD("last-name")
        return " ".join(names)
    if cat == "pp":
        np = fd.get("np")
        if np is None:
            raise UnrealizableFD("np")
        return f"{fd.get('prep', 'of')} {realize(np)}"

    pieces = []
    det = fd.get("determiner")
    if det is not None and det != "none":
        pieces.append(det if isinstance(det, str) else realize(det))
    possessor = fd.get("possessor")
    if possessor is not None:
        pieces.append(realize(possessor) + "'s")
    classifier = fd.get("classifier")
    if classifier is not None:
        pieces.append(realize(classifier))
    head = fd.get("head")
    if head is not None:
        pieces.append(realize(head))
    elif fd.has("lex"):
        pieces.append(_realize_lex(fd))
    else:
        raise UnrealizableFD("head")
    qualifier = fd.get("qualifier")
    if qualifier is not None:
        pieces.append(realize(qualifier))
    return " ".join(pieces)


# --------------------------------------------------------------------------
# Transformations

def _classifier_chain(value: FD | None) -> list[FD]:
    if value is None:
        return []
    if value.get("cat") == "noun-compound":
        return _classifier_chain(value.get("classifier")) + [value.get("head").copy()]
    return [value.copy()]


def _fold_chain(chain: list[FD]) -> FD:
    acc = chain[0]
    for item in chain[1:]:
        acc = FD([("cat", "noun-compound"), ("classifier", acc), ("head", item)])
    return acc


def enhance_former(fd: FD) -> FD:
    """New FD with classifier "former" prepended to the classifier chain.

    Not idempotent by design: applying it twice yields "former former".
    The input FD is unchanged.
    """
    if not fd.has("head"):
        raise UnrealizableFD("head")
    chain = [_lex_fd("former")] + _classifier_chain(fd.get("classifier"))
    return fd.replaced("classifier", _fold_chain(chain))


def _title_and_names(fd: FD):
    if fd.has("complex") or not fd.has("classifier") or not fd.has("head"):
        raise NotAggregatable("expected a title plus name structure")
    title = fd.get("classifier").copy()
    title = FD((n, v) for n, v in title.features if n != "number")
    head = fd.get("head")
    if head.get("complex") == "conjunction":
        names = [m.copy() for m in head.get("distinct")]
    else:
        names = [head.copy()]
    return title, names


def aggregate(fd1: FD, fd2: FD) -> FD:
    """Merge two title+name FDs sharing the same title into one FD with a
    pluralized title and a conjoined name list. Inputs are unchanged."""
    title1, names1 = _title_and_names(fd1)
    title2, names2 = _title_and_names(fd2)
    if title1 != title2:
        raise NotAggregatable("titles differ")
    plural_title = FD(list(title1.features) + [("number", "plural")])
    conjunction = FD([("cat", "np"), ("complex", "conjunction"),
                      ("distinct", names1 + names2)])
    return FD([("cat", "np"), ("classifier", plural_title), ("head", conjunction)])


def select_by_category(entries, preferred: str):
    """Highest-frequency entry whose categories include the preferred
    label; falls back to the overall highest-frequency entry. Ties break
    on the surface string."""
    if not entries:
        raise ValueError("entries must be non-empty")
    ranked = sorted(entries, key=lambda e: (-e.frequency, e.surface))
    for entry in ranked:
        if any(c.category == preferred for c in entry.categories):
            return entry
    return ranked[0]
