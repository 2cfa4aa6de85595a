"""Common-word dictionary, hypernym taxonomy, and trigger-based
semantic categorization of descriptions.

The taxonomy is a word-level directed acyclic graph (child -> parent).
Category rules bind a category label to an anchor node; a description
word triggers a category when the word, or any of its hypernym
ancestors, is an anchor. The reserved NUMERIC anchor categorizes bare
numbers (single CD-token descriptions) as ages.
"""

from dataclasses import dataclass, field
from pathlib import Path

from .errors import CycleError, FormatError, UnresolvedAnchor
from .text import Tag, Token

NUMERIC_ANCHOR = "NUMERIC"


@dataclass(frozen=True)
class CategoryRule:
    category: str
    anchor: str


@dataclass(frozen=True)
class Categorization:
    category: str
    trigger: str
    anchor: str


@dataclass
class LexDB:
    dictionary: set[str] = field(default_factory=set)
    hypernym_edges: dict[str, list[str]] = field(default_factory=dict)
    category_rules: list[CategoryRule] = field(default_factory=list)

    def __post_init__(self):
        self._check_acyclic()
        self._anchors = {}
        nodes = self.nodes()
        for rule in self.category_rules:
            if rule.anchor != NUMERIC_ANCHOR and rule.anchor not in nodes:
                raise UnresolvedAnchor(
                    f"rule {rule.category!r} anchored at unknown node {rule.anchor!r}")
            if self._anchors.get(rule.anchor, rule.category) != rule.category:
                raise FormatError(f"anchor {rule.anchor!r} bound to two categories")
            self._anchors[rule.anchor] = rule.category

    def nodes(self) -> set[str]:
        nodes = set(self.hypernym_edges)
        for parents in self.hypernym_edges.values():
            nodes.update(parents)
        return nodes

    def categories(self) -> list[str]:
        return sorted({rule.category for rule in self.category_rules})

    def _check_acyclic(self):
        state: dict[str, int] = {}
        stack: list[str] = []

        def visit(node):
            state[node] = 1
            stack.append(node)
            for parent in self.hypernym_edges.get(node, ()):
                if state.get(parent) == 1:
                    raise CycleError(stack[stack.index(parent):] + [parent])
                if parent not in state:
                    visit(parent)
            stack.pop()
            state[node] = 2

        for node in self.hypernym_edges:
            if node not in state:
                visit(node)

    # ------------------------------------------------------------------
    def is_common(self, word: str) -> bool:
        """True iff the lowercased word is in the common-word dictionary."""
        return word.lower() in self.dictionary

    def hypernym_closure(self, word: str) -> set[str]:
        """All ancestors of the word in the taxonomy (never the word
        itself; the graph is acyclic). Unknown words yield an empty set."""
        closure: set[str] = set()
        frontier = [word.lower()]
        while frontier:
            node = frontier.pop()
            for parent in self.hypernym_edges.get(node, ()):
                if parent not in closure:
                    closure.add(parent)
                    frontier.append(parent)
        return closure

    def categorize(self, description_tokens: list[Token]) -> list[Categorization]:
        """Categorize a description by its trigger words.

        A word triggers a category when it can be traced up to a rule
        anchor (a zero-length trace counts: an anchor word triggers its
        own category). A single CD token that is the entire description
        triggers the NUMERIC-anchored rule (ages in apposition, like
        "Ousland, 33"). Duplicates are collapsed; token order is kept.
        """
        results: list[Categorization] = []
        seen: set[Categorization] = set()

        def emit(c: Categorization):
            if c not in seen:
                seen.add(c)
                results.append(c)

        numeric_rule = next(
            (r for r in self.category_rules if r.anchor == NUMERIC_ANCHOR), None)
        if (numeric_rule is not None and len(description_tokens) == 1
                and description_tokens[0].tag is Tag.CD):
            tok = description_tokens[0]
            emit(Categorization(numeric_rule.category, tok.word, NUMERIC_ANCHOR))
            return results

        for tok in description_tokens:
            word = tok.word.lower()
            reach = {word} | self.hypernym_closure(word)
            for rule in self.category_rules:
                if rule.anchor in reach:
                    emit(Categorization(rule.category, word, rule.anchor))
        return results


def load_lexdb(dictionary_file: str | Path, taxonomy_file: str | Path,
               rules_file: str | Path) -> LexDB:
    """Load and validate the three data files.

    dictionary: one lowercase word per line. taxonomy: ``child<TAB>parent``
    per line. rules: ``category<TAB>anchor`` per line (``age<TAB>NUMERIC``
    is the reserved numeric form). '#' lines are comments everywhere.
    """
    dictionary = set()
    for word in _data_lines(dictionary_file):
        if "\t" in word or " " in word:
            raise FormatError(f"{dictionary_file}: bad dictionary entry {word!r}")
        dictionary.add(word.lower())

    edges: dict[str, list[str]] = {}
    for line in _data_lines(taxonomy_file):
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError(f"{taxonomy_file}: expected child<TAB>parent, got {line!r}")
        child, parent = (p.strip().lower() for p in parts)
        edges.setdefault(child, [])
        if parent not in edges[child]:
            edges[child].append(parent)

    rules = []
    for line in _data_lines(rules_file):
        parts = line.split("\t")
        if len(parts) != 2:
            raise FormatError(f"{rules_file}: expected category<TAB>anchor, got {line!r}")
        category, anchor = parts[0].strip().lower(), parts[1].strip()
        if anchor != NUMERIC_ANCHOR:
            anchor = anchor.lower()
        rules.append(CategoryRule(category, anchor))

    return LexDB(dictionary, edges, rules)


def _data_lines(path: str | Path):
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            yield line
