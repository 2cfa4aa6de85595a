"""Tokens, part-of-speech tags, and the ``word@TAG`` tagged-text format.

Everything downstream works on sequences of :class:`Token`. Input can be
plain text (tokenized and tagged here with a small priority rule tagger)
or pre-tagged text in the ``word@TAG`` notation, which round-trips exactly
through :func:`parse_tagged` / :func:`render_tagged`.
"""

import datetime
import enum
from dataclasses import dataclass, field
from pathlib import Path

from .errors import FormatError, MissingResource


class Tag(enum.Enum):
    """Part-of-speech tag inventory.

    NP proper noun, NN singular common noun, NNS plural common noun,
    JJ adjective, CD cardinal number, DT determiner, POS possessive
    marker, IN preposition, CC conjunction, VB verb (any form),
    COMMA, PUNCT other punctuation, UNK unknown.
    """

    NP = "NP"
    NN = "NN"
    NNS = "NNS"
    JJ = "JJ"
    CD = "CD"
    DT = "DT"
    POS = "POS"
    IN = "IN"
    CC = "CC"
    VB = "VB"
    COMMA = "COMMA"
    PUNCT = "PUNCT"
    UNK = "UNK"


# Accepted spellings on input. "NPNP" is the legacy alias for NP; "$" and
# "," are the canonical renderings of POS and COMMA.
_TAG_ALIASES = {
    "NPNP": Tag.NP,
    "$": Tag.POS,
    ",": Tag.COMMA,
    ".": Tag.PUNCT,
}


def parse_tag(text: str) -> Tag:
    if text in _TAG_ALIASES:
        return _TAG_ALIASES[text]
    try:
        return Tag(text)
    except ValueError:
        raise FormatError(f"unknown tag {text}") from None


def render_tag(tag: Tag) -> str:
    if tag is Tag.POS:
        return "$"
    if tag is Tag.COMMA:
        return ","
    return tag.value


@dataclass(frozen=True)
class Token:
    """A surface word paired with exactly one tag."""

    word: str
    tag: Tag

    def __post_init__(self):
        if not self.word or any(c.isspace() for c in self.word) or "@" in self.word:
            raise FormatError(f"bad token word {self.word!r}")

    def __repr__(self):
        return f"{self.word}@{self.tag.value}"


@dataclass
class TaggedDoc:
    """A tagged document with provenance metadata."""

    id: str
    source: str
    date: datetime.date
    tokens: list[Token] = field(default_factory=list)

    def __len__(self):
        return len(self.tokens)


# --------------------------------------------------------------------------
# Tokenization

_PUNCT_CHARS = set(",.;:!?\"'`()[]")
_POSSESSIVES = ("'s", "'S")


def _split_chunk(chunk: str) -> list[str]:
    if chunk in _POSSESSIVES:
        return [chunk]
    lead = []
    while len(chunk) > 1 and chunk[0] in _PUNCT_CHARS and chunk not in _POSSESSIVES:
        lead.append(chunk[0])
        chunk = chunk[1:]
    trail = []
    while len(chunk) > 1 and chunk[-1] in _PUNCT_CHARS and chunk not in _POSSESSIVES:
        trail.append(chunk[-1])
        chunk = chunk[:-1]
    trail.reverse()
    if len(chunk) > 2 and chunk.endswith(_POSSESSIVES):
        parts = [chunk[:-2], chunk[-2:]]
    else:
        parts = [chunk]
    return lead + parts + trail


def tokenize(text: str) -> list[str]:
    """Split raw text into words.

    Splits on whitespace, peels leading/trailing punctuation (commas,
    periods, quotes, brackets) into their own words, and detaches
    possessive "'s". Empty input yields an empty list.
    """
    words: list[str] = []
    for chunk in text.split():
        words.extend(_split_chunk(chunk))
    return words


def detokenize(words: list[str]) -> str:
    """Join words back into running text, re-attaching possessives and
    trailing punctuation to the preceding word."""
    out: list[str] = []
    for w in words:
        if out and (w in _POSSESSIVES or (len(w) == 1 and w in ",.;:!?)]")):
            out[-1] += w
        else:
            out.append(w)
    return " ".join(out)


# --------------------------------------------------------------------------
# Tagging

@dataclass(frozen=True)
class SuffixRule:
    """Assign ``tag`` to words ending in ``suffix``. When ``base_tag`` is
    set, the rule fires only if the stem (word minus suffix) is in the
    lexicon with that tag."""

    suffix: str
    tag: Tag
    base_tag: Tag | None = None


def tag(words: list[str], lexicon: dict[str, Tag], rules: list[SuffixRule]) -> list[Token]:
    """Assign one tag to every word.

    Priority: exact lexicon hit, then shape rules (all digits -> CD,
    "," -> COMMA, "'s" -> POS, other bare punctuation -> PUNCT,
    capitalized unknown -> NP), then suffix rules in file order, then UNK.
    """
    if lexicon is None or rules is None:
        raise MissingResource("tagger lexicon and suffix rules must be loaded")
    out = []
    for word in words:
        out.append(Token(word, _tag_word(word, lexicon, rules)))
    return out


def _tag_word(word: str, lexicon: dict[str, Tag], rules: list[SuffixRule]) -> Tag:
    if word in lexicon:
        return lexicon[word]
    if word.isdigit():
        return Tag.CD
    if word == ",":
        return Tag.COMMA
    if word in _POSSESSIVES:
        return Tag.POS
    if all(not c.isalnum() for c in word):
        return Tag.PUNCT
    if word[0].isupper():
        return Tag.NP
    for rule in rules:
        if not word.endswith(rule.suffix) or len(word) <= len(rule.suffix):
            continue
        if rule.base_tag is not None:
            stem = word[: -len(rule.suffix)]
            if lexicon.get(stem) is rule.base_tag:
                return rule.tag
            continue
        return rule.tag
    return Tag.UNK


def load_tag_lexicon(path: str | Path) -> dict[str, Tag]:
    """Read a ``word<TAB>TAG`` lexicon file. Lines starting with '#' are
    ignored."""
    lexicon: dict[str, Tag] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError(f"{path}:{lineno}: expected word<TAB>TAG")
        lexicon[parts[0]] = parse_tag(parts[1])
    return lexicon


def load_suffix_rules(path: str | Path) -> list[SuffixRule]:
    """Read suffix rules, one ``-suffix<TAB>TAG[<TAB>BASETAG]`` per line."""
    rules = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (2, 3) or not parts[0].startswith("-"):
            raise FormatError(f"{path}:{lineno}: expected -suffix<TAB>TAG[<TAB>BASETAG]")
        base = parse_tag(parts[2]) if len(parts) == 3 else None
        rules.append(SuffixRule(parts[0][1:], parse_tag(parts[1]), base))
    return rules


# --------------------------------------------------------------------------
# Tagged text format

def parse_tagged(line: str) -> list[Token]:
    """Parse whitespace-separated ``word@TAG`` items into tokens.

    "NPNP" is normalized to NP, "$" to POS, the bare "," tag to COMMA.
    Raises FormatError naming the offending item otherwise.
    """
    tokens = []
    for item in line.split():
        if "@" not in item:
            raise FormatError(f"missing '@' in {item!r}")
        word, tagtext = item.rsplit("@", 1)
        if not word:
            raise FormatError(f"missing word in {item!r}")
        try:
            t = parse_tag(tagtext)
        except FormatError:
            raise FormatError(f"unknown tag {tagtext} in {item!r}") from None
        tokens.append(Token(word, t))
    return tokens


def render_tagged(tokens: list[Token]) -> str:
    """Render tokens as single-space-joined ``word@TAG`` items."""
    return " ".join(f"{t.word}@{render_tag(t.tag)}" for t in tokens)


def sentence_spans(tokens: list[Token]) -> list[tuple[int, int]]:
    """Half-open [start, end) spans of sentences. A period token ends a
    sentence; the period belongs to its sentence."""
    spans = []
    start = 0
    for i, tok in enumerate(tokens):
        if tok.word == ".":
            spans.append((start, i + 1))
            start = i + 1
    if start < len(tokens):
        spans.append((start, len(tokens)))
    return spans


# --------------------------------------------------------------------------
# Corpus files

_DOC_HEADER = "#DOC"


def parse_corpus(text: str) -> list[TaggedDoc]:
    """Parse a tagged corpus: blocks starting with a
    ``#DOC id=... source=... date=YYYY-MM-DD`` header, followed by lines
    of ``word@TAG`` items, terminated by a blank line."""
    docs = []
    current: TaggedDoc | None = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        if stripped.startswith(_DOC_HEADER):
            current = _parse_doc_header(stripped, lineno)
            docs.append(current)
        elif not stripped:
            current = None
        else:
            if current is None:
                raise FormatError(f"line {lineno}: tagged text before #DOC header")
            current.tokens.extend(parse_tagged(stripped))
    return docs


def _parse_doc_header(line: str, lineno: int) -> TaggedDoc:
    fields = {}
    for item in line[len(_DOC_HEADER):].split():
        if "=" not in item:
            raise FormatError(f"line {lineno}: bad header field {item!r}")
        key, value = item.split("=", 1)
        fields[key] = value
    for key in ("id", "source", "date"):
        if key not in fields:
            raise FormatError(f"line {lineno}: #DOC header missing {key}")
    try:
        date = datetime.date.fromisoformat(fields["date"])
    except ValueError:
        raise FormatError(f"line {lineno}: bad date {fields['date']!r}") from None
    return TaggedDoc(id=fields["id"], source=fields["source"], date=date)


def render_corpus(docs: list[TaggedDoc]) -> str:
    """Inverse of :func:`parse_corpus`; one sentence per line."""
    blocks = []
    for doc in docs:
        lines = [f"#DOC id={doc.id} source={doc.source} date={doc.date.isoformat()}"]
        for start, end in sentence_spans(doc.tokens):
            lines.append(render_tagged(doc.tokens[start:end]))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def read_corpus_file(path: str | Path, *, lexicon=None, rules=None,
                     source: str | None = None,
                     date: datetime.date | None = None) -> list[TaggedDoc]:
    """Read one corpus file, auto-detected by its first line.

    Files starting with ``#DOC`` are parsed as tagged corpora; anything
    else is treated as one plain-text document, tokenized and tagged with
    the given (or default) tagger resources.
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    if text.lstrip().startswith(_DOC_HEADER):
        return parse_corpus(text)
    if lexicon is None or rules is None:
        from .resources import default_tagger_resources
        lexicon, rules = default_tagger_resources()
    tokens = tag(tokenize(text), lexicon, rules)
    return [TaggedDoc(id=path.stem, source=source or path.stem,
                      date=date or datetime.date.today(), tokens=tokens)]


def read_corpus_dir(path: str | Path, **kwargs) -> list[TaggedDoc]:
    """Read every regular file in a directory, sorted by name."""
    docs = []
    for child in sorted(Path(path).iterdir()):
        if child.is_file():
            docs.extend(read_corpus_file(child, **kwargs))
    return docs
