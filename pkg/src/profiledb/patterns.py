"""Token-level finite-state pattern language.

Patterns match sequences of tagged tokens. A pattern file holds named
definitions (``NAME = expr``) where an expression is built from word
literals (optionally ``[Xx]``-case-classed on the first letter and
optionally constrained to a tag with ``@TAG``), bare tag predicates
(``@TAG``), references ``{NAME}``, alternation ``|``, juxtaposition,
grouping, and the postfix operators ``+ * ?``. ``{SPACE}`` is accepted
and ignored; ``{COMMA}`` is the comma-tag predicate. Reference graphs
must be acyclic, so every pattern denotes a regular language.

Matching compiles expressions to an epsilon-NFA and simulates it with
prioritized thread sets, yielding leftmost-longest, non-overlapping
matches that never cross sentence boundaries.
"""

import re
from dataclasses import dataclass, field

from .errors import CycleError, DanglingRef, EmptyEntity, ParseError
from .text import TaggedDoc, Tag, Token, parse_tag, sentence_spans


# --------------------------------------------------------------------------
# Expression tree

class PatternExpr:
    """Base class for pattern expression nodes."""


@dataclass(frozen=True)
class Literal(PatternExpr):
    """Match one token by word, optionally case-insensitive on the first
    letter, optionally also requiring a tag."""

    word: str
    ci_first: bool = False
    tag: Tag | None = None

    def matches(self, token: Token) -> bool:
        if self.tag is not None and token.tag is not self.tag:
            return False
        if self.ci_first:
            return (len(token.word) >= 1
                    and token.word[:1].lower() == self.word[:1].lower()
                    and token.word[1:] == self.word[1:])
        return token.word == self.word


@dataclass(frozen=True)
class TagIs(PatternExpr):
    """Match any one token carrying the given tag."""

    tag: Tag

    def matches(self, token: Token) -> bool:
        return token.tag is self.tag


@dataclass(frozen=True)
class Ref(PatternExpr):
    name: str


@dataclass(frozen=True)
class Seq(PatternExpr):
    items: tuple[PatternExpr, ...]


@dataclass(frozen=True)
class Alt(PatternExpr):
    items: tuple[PatternExpr, ...]


@dataclass(frozen=True)
class Repeat(PatternExpr):
    """``min`` and ``max`` repetitions of ``expr``; ``max=None`` means
    unbounded."""

    expr: PatternExpr
    min: int = 0
    max: int | None = None

    def __post_init__(self):
        if self.min < 0 or (self.max is not None and self.max < self.min):
            raise ParseError(f"bad repetition bounds ({self.min},{self.max})")


@dataclass(frozen=True)
class Capture(PatternExpr):
    label: str
    expr: PatternExpr


@dataclass
class PatternSet:
    """Named pattern definitions plus the name of the root pattern."""

    definitions: dict[str, PatternExpr]
    entry: str

    def __post_init__(self):
        if self.entry not in self.definitions:
            raise DanglingRef(self.entry)
        validate(self.definitions)

    def root(self) -> PatternExpr:
        return self.definitions[self.entry]


@dataclass(frozen=True)
class MatchSpan:
    doc_id: str
    start: int
    end: int
    captures: dict[str, tuple[int, int]] = field(default_factory=dict, compare=False)


def validate(definitions: dict[str, PatternExpr]) -> None:
    """Check that every Ref resolves and the reference graph is acyclic."""

    def refs(expr: PatternExpr):
        if isinstance(expr, Ref):
            yield expr.name
        elif isinstance(expr, (Seq, Alt)):
            for item in expr.items:
                yield from refs(item)
        elif isinstance(expr, Repeat):
            yield from refs(expr.expr)
        elif isinstance(expr, Capture):
            yield from refs(expr.expr)

    graph = {name: sorted(set(refs(expr))) for name, expr in definitions.items()}
    for name, targets in graph.items():
        for target in targets:
            if target not in definitions:
                raise DanglingRef(target)

    state: dict[str, int] = {}  # 1 = on stack, 2 = done
    stack: list[str] = []

    def visit(name):
        state[name] = 1
        stack.append(name)
        for target in graph[name]:
            if state.get(target) == 1:
                raise CycleError(stack[stack.index(target):] + [target])
            if target not in state:
                visit(target)
        stack.pop()
        state[name] = 2

    for name in definitions:
        if name not in state:
            visit(name)


# --------------------------------------------------------------------------
# Definition file parser

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_WORD_RE = re.compile(r"[A-Za-z0-9'._-]+")


class _Lexer:
    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0
        self.tokens: list[tuple[str, str]] = []
        self._scan()

    def _scan(self):
        text = self.text
        i = 0
        while i < len(text):
            c = text[i]
            if c.isspace():
                i += 1
            elif c in "()|+*?":
                self.tokens.append((c, c))
                i += 1
            elif c == "{":
                end = text.find("}", i)
                if end < 0:
                    raise ParseError("unterminated '{'", self.line)
                self.tokens.append(("ref", text[i + 1:end]))
                i = end + 1
            elif c == "@":
                m = re.match(r"[A-Za-z$,.]+", text[i + 1:])
                if not m:
                    raise ParseError("'@' without a tag", self.line)
                self.tokens.append(("tag", m.group(0)))
                i += 1 + m.end()
            elif c == "[":
                m = re.match(r"\[(\w)(\w)\]", text[i:])
                if not m or m.group(1).lower() != m.group(2).lower():
                    raise ParseError(f"bad case class at {text[i:i+4]!r}", self.line)
                rest = _WORD_RE.match(text, i + m.end()) if i + m.end() < len(text) else None
                word = m.group(1) + (rest.group(0) if rest else "")
                i = rest.end() if rest else i + m.end()
                tag = self._maybe_tag(text, i)
                if tag:
                    i += 1 + len(tag)
                self.tokens.append(("lit_ci", word) if tag is None else ("lit_ci_tag", (word, tag)))
            else:
                m = _WORD_RE.match(text, i)
                if not m:
                    raise ParseError(f"unexpected character {c!r}", self.line)
                word = m.group(0)
                i = m.end()
                tag = self._maybe_tag(text, i)
                if tag:
                    i += 1 + len(tag)
                self.tokens.append(("lit", word) if tag is None else ("lit_tag", (word, tag)))

    @staticmethod
    def _maybe_tag(text: str, i: int) -> str | None:
        if i < len(text) and text[i] == "@":
            m = re.match(r"[A-Za-z$,.]+", text[i + 1:])
            if m:
                return m.group(0)
        return None


class _ExprParser:
    def __init__(self, tokens: list[tuple[str, str]], line: int):
        self.tokens = tokens
        self.line = line
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> PatternExpr:
        expr = self.alternation()
        if self.peek()[0] is not None:
            raise ParseError(f"unexpected {self.peek()[1]!r}", self.line)
        return expr

    def alternation(self) -> PatternExpr:
        branches = [self.sequence()]
        while self.peek()[0] == "|":
            self.take()
            branches.append(self.sequence())
        return branches[0] if len(branches) == 1 else Alt(tuple(branches))

    def sequence(self) -> PatternExpr:
        items = []
        while self.peek()[0] not in (None, "|", ")"):
            item = self.postfixed()
            if item is not None:
                items.append(item)
        return items[0] if len(items) == 1 else Seq(tuple(items))

    def postfixed(self) -> PatternExpr | None:
        expr = self.atom()
        while self.peek()[0] in ("+", "*", "?"):
            op = self.take()[0]
            if expr is None:
                raise ParseError(f"{op!r} has nothing to repeat", self.line)
            if op == "+":
                expr = Repeat(expr, 1, None)
            elif op == "*":
                expr = Repeat(expr, 0, None)
            else:
                expr = Repeat(expr, 0, 1)
        return expr

    def atom(self) -> PatternExpr | None:
        kind, value = self.take()
        if kind == "(":
            expr = self.alternation()
            if self.take()[0] != ")":
                raise ParseError("missing ')'", self.line)
            return expr
        if kind == "ref":
            if value == "SPACE":
                return None  # token streams carry no space tokens
            if value == "COMMA":
                return TagIs(Tag.COMMA)
            return Ref(value)
        if kind == "tag":
            return TagIs(parse_tag(value))
        if kind == "lit":
            return Literal(value)
        if kind == "lit_ci":
            return Literal(value, ci_first=True)
        if kind == "lit_tag":
            return Literal(value[0], tag=parse_tag(value[1]))
        if kind == "lit_ci_tag":
            return Literal(value[0], ci_first=True, tag=parse_tag(value[1]))
        raise ParseError(f"unexpected {value!r}", self.line)


def parse_pattern_defs(source: str) -> PatternSet:
    """Parse ``NAME = expr`` lines into a validated PatternSet.

    The first definition is the entry pattern. '#' starts a comment;
    blank lines are ignored.
    """
    definitions: dict[str, PatternExpr] = {}
    entry = None
    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError("expected NAME = expr", lineno)
        name, expr_text = line.split("=", 1)
        name = name.strip()
        if not _NAME_RE.fullmatch(name):
            raise ParseError(f"bad pattern name {name!r}", lineno)
        if name in definitions:
            raise ParseError(f"duplicate definition {name!r}", lineno)
        lexer = _Lexer(expr_text, lineno)
        definitions[name] = _ExprParser(lexer.tokens, lineno).parse()
        if entry is None:
            entry = name
    if entry is None:
        raise ParseError("no definitions found")
    return PatternSet(definitions, entry)


def compile_entity_pattern(entity_words: list[str]) -> PatternExpr:
    """Build the search pattern for an entity name: per word, the first
    letter is case-insensitive, the remainder exact, and the tag must be
    the proper-noun tag."""
    if not entity_words or any(not w for w in entity_words):
        raise EmptyEntity(f"bad entity words {entity_words!r}")
    return Seq(tuple(Literal(w, ci_first=True, tag=Tag.NP) for w in entity_words))


# --------------------------------------------------------------------------
# NFA compilation (Thompson construction, inlined references)

_TOK = "tok"
_EPS = "eps"


class _NFA:
    def __init__(self):
        self.edges: list[list[tuple]] = []  # state -> ordered edge list
        self.start = self.new_state()
        self.accept: int | None = None

    def new_state(self) -> int:
        self.edges.append([])
        return len(self.edges) - 1

    def add_tok(self, src: int, pred, dst: int):
        self.edges[src].append((_TOK, pred, dst))

    def add_eps(self, src: int, dst: int, action=None):
        self.edges[src].append((_EPS, action, dst))


def compile_nfa(expr: PatternExpr, definitions: dict[str, PatternExpr] | None = None) -> _NFA:
    defs = definitions or {}
    validate({**defs, "": expr})
    nfa = _NFA()

    def build(e: PatternExpr, src: int) -> int:
        if isinstance(e, (Literal, TagIs)):
            dst = nfa.new_state()
            nfa.add_tok(src, e, dst)
            return dst
        if isinstance(e, Ref):
            return build(defs[e.name], src)
        if isinstance(e, Seq):
            for item in e.items:
                src = build(item, src)
            return src
        if isinstance(e, Alt):
            out = nfa.new_state()
            for item in e.items:
                branch = nfa.new_state()
                nfa.add_eps(src, branch)
                nfa.add_eps(build(item, branch), out)
            return out
        if isinstance(e, Repeat):
            for _ in range(e.min):
                src = build(e.expr, src)
            if e.max is None:
                loop = nfa.new_state()
                out = nfa.new_state()
                nfa.add_eps(src, loop)
                body_end = build(e.expr, loop)
                nfa.add_eps(body_end, loop)  # greedy: loop back first
                nfa.add_eps(loop, out)
                # reorder so entering the body is tried before exiting
                nfa.edges[loop].reverse()
                return out
            out = nfa.new_state()
            cur = src
            for _ in range(e.max - e.min):
                enter = nfa.new_state()
                nfa.add_eps(cur, enter)  # greedy: try the body first
                nfa.add_eps(cur, out)
                cur = build(e.expr, enter)
            nfa.add_eps(cur, out)
            return out
        if isinstance(e, Capture):
            inner = nfa.new_state()
            nfa.add_eps(src, inner, ("open", e.label))
            end = build(e.expr, inner)
            out = nfa.new_state()
            nfa.add_eps(end, out, ("close", e.label))
            return out
        raise TypeError(f"not a PatternExpr: {e!r}")

    nfa.accept = build(expr, nfa.start)
    return nfa


class _Thread:
    __slots__ = ("state", "opens", "caps")

    def __init__(self, state, opens, caps):
        self.state = state
        self.opens = opens
        self.caps = caps


def _closure(nfa: _NFA, threads: list[_Thread], pos: int) -> list[_Thread]:
    """Expand epsilon edges in priority order, keeping the first thread
    that reaches each state."""
    out: list[_Thread] = []
    seen: set[int] = set()

    def walk(thread: _Thread):
        if thread.state in seen:
            return
        seen.add(thread.state)
        out.append(thread)
        for kind, action, dst in nfa.edges[thread.state]:
            if kind != _EPS:
                continue
            opens, caps = thread.opens, thread.caps
            if action is not None:
                op, label = action
                if op == "open":
                    opens = {**opens, label: pos}
                else:
                    caps = {**caps, label: (opens[label], pos)}
            walk(_Thread(dst, opens, caps))

    for t in threads:
        walk(t)
    return out


def longest_match_at(nfa: _NFA, tokens: list[Token], start: int, limit: int) -> tuple[int, dict] | None:
    """Longest match of the NFA anchored at ``start``, confined to
    positions below ``limit``. Returns (end, captures) or None; empty
    matches are reported as None."""
    threads = _closure(nfa, [_Thread(nfa.start, {}, {})], start)
    best = None
    pos = start
    while True:
        for t in threads:
            if t.state == nfa.accept:
                if pos > start:
                    best = (pos, t.caps)
                break
        if pos >= limit or not threads:
            break
        token = tokens[pos]
        advanced = []
        for t in threads:
            for kind, pred, dst in nfa.edges[t.state]:
                if kind == _TOK and pred.matches(token):
                    advanced.append(_Thread(dst, t.opens, t.caps))
        pos += 1
        threads = _closure(nfa, advanced, pos)
    return best


def _resolve(pattern) -> tuple[PatternExpr, dict[str, PatternExpr]]:
    if isinstance(pattern, PatternSet):
        return pattern.root(), pattern.definitions
    if isinstance(pattern, PatternExpr):
        return pattern, {}
    raise TypeError(f"expected PatternExpr or PatternSet, got {type(pattern).__name__}")


def find_matches(pattern, doc: TaggedDoc) -> list[MatchSpan]:
    """All leftmost-longest, non-overlapping matches in document order.

    Matches never cross sentence boundaries. Within a match, each capture
    label records the span of its last completed occurrence.
    """
    expr, defs = _resolve(pattern)
    nfa = compile_nfa(expr, defs)
    spans = []
    for sent_start, sent_end in sentence_spans(doc.tokens):
        pos = sent_start
        while pos < sent_end:
            m = longest_match_at(nfa, doc.tokens, pos, sent_end)
            if m is None:
                pos += 1
                continue
            end, caps = m
            spans.append(MatchSpan(doc.id, pos, end, dict(caps)))
            pos = end
    return spans


def accepts(pattern, tokens: list[Token]) -> bool:
    """True iff the pattern matches the whole token sequence exactly."""
    expr, defs = _resolve(pattern)
    nfa = compile_nfa(expr, defs)
    return len(tokens) in match_ends(nfa, tokens, 0, len(tokens))


def match_ends(nfa: _NFA, tokens: list[Token], start: int, limit: int) -> set[int]:
    """Every end position reachable from ``start``."""
    threads = _closure(nfa, [_Thread(nfa.start, {}, {})], start)
    ends = set()
    pos = start
    while True:
        if any(t.state == nfa.accept for t in threads):
            ends.add(pos)
        if pos >= limit or not threads:
            break
        token = tokens[pos]
        advanced = [_Thread(dst, t.opens, t.caps)
                    for t in threads
                    for kind, pred, dst in nfa.edges[t.state]
                    if kind == _TOK and pred.matches(token)]
        pos += 1
        threads = _closure(nfa, advanced, pos)
    return ends
