"""Entity-candidate proposal, dictionary weeding, and description
extraction around entity mentions.

Candidates are the 2-grams and 3-grams of maximal proper-noun runs.
Weeding keeps only candidates in which no word is a common dictionary
word. Descriptions are noun phrases adjacent to an entity match: a
premodifier span ending where the entity starts, or an apposition
between ``entity ,`` and the next comma or sentence end.
"""

import datetime
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .lexicon import Categorization, LexDB
from .patterns import PatternSet, compile_entity_pattern, compile_nfa, find_matches, match_ends
from .text import TaggedDoc, Tag, Token, detokenize, parse_tagged, render_tagged, sentence_spans


@dataclass
class EntityCandidate:
    words: tuple[str, ...]
    occurrences: int = 1


@dataclass(frozen=True)
class Description:
    entity_key: str
    tokens: tuple[Token, ...]
    kind: str  # "premodifier" | "apposition"
    source: str
    date: datetime.date
    doc_id: str

    def surface(self) -> str:
        return detokenize([t.word for t in self.tokens])


def normalize_key(words) -> str:
    """Entity keys are lowercase words joined by single spaces."""
    if isinstance(words, str):
        words = words.split()
    return " ".join(w.lower() for w in words)


def extract_candidates(corpus: list[TaggedDoc]) -> list[EntityCandidate]:
    """Propose entity candidates from runs of consecutive NP tokens.

    Every maximal run of length >= 2 contributes all its 2-grams and
    3-grams, case-sensitively; counts aggregate across the corpus and
    candidates are reported in first-seen order.
    """
    counts: dict[tuple[str, ...], int] = {}
    for doc in corpus:
        for run in _np_runs(doc.tokens):
            words = [t.word for t in run]
            for n in (2, 3):
                for i in range(len(words) - n + 1):
                    gram = tuple(words[i:i + n])
                    counts[gram] = counts.get(gram, 0) + 1
    return [EntityCandidate(words, count) for words, count in counts.items()]


def _np_runs(tokens: list[Token]):
    run: list[Token] = []
    for tok in tokens:
        if tok.tag is Tag.NP:
            run.append(tok)
        else:
            if len(run) >= 2:
                yield run
            run = []
    if len(run) >= 2:
        yield run


def weed_candidates(cands: list[EntityCandidate], lex: LexDB) -> list[EntityCandidate]:
    """Keep only candidates in which no word is in the dictionary."""
    return [c for c in cands if not any(lex.is_common(w) for w in c.words)]


def extract_descriptions(entity_words: list[str], corpus: list[TaggedDoc],
                         np_grammar: PatternSet, jobs: int = 1) -> list[Description]:
    """All premodifier and apposition descriptions for one entity.

    Each entity match yields at most one premodifier (the maximal
    noun-phrase span ending where the match starts) and one apposition
    (the maximal noun-phrase span after ``entity ,``, stopped by the next
    comma or the sentence end). Repeats within a document are distinct
    occurrences.
    """
    pattern = compile_entity_pattern(list(entity_words))
    np_nfa = compile_nfa(np_grammar.root(), np_grammar.definitions)
    key = normalize_key(list(entity_words))

    def scan(doc: TaggedDoc) -> list[Description]:
        found = []
        sentences = sentence_spans(doc.tokens)
        for span in find_matches(pattern, doc):
            sent = next(s for s in sentences if s[0] <= span.start < s[1])
            pre = _premodifier_span(doc.tokens, np_nfa, span.start, sent[0])
            if pre is not None:
                found.append(_make(doc, key, pre, "premodifier"))
            apb = _apposition_span(doc.tokens, np_nfa, span.end, sent[1])
            if apb is not None:
                found.append(_make(doc, key, apb, "apposition"))
        return found

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            per_doc = list(pool.map(scan, corpus))
    else:
        per_doc = [scan(doc) for doc in corpus]
    return [d for docs in per_doc for d in docs]


def _make(doc: TaggedDoc, key: str, span: tuple[int, int], kind: str) -> Description:
    return Description(entity_key=key, tokens=tuple(doc.tokens[span[0]:span[1]]),
                       kind=kind, source=doc.source, date=doc.date, doc_id=doc.id)


def _premodifier_span(tokens, np_nfa, entity_start, sent_start):
    for j in range(sent_start, entity_start):
        if entity_start in match_ends(np_nfa, tokens, j, entity_start):
            return (j, entity_start)
    return None


def _apposition_span(tokens, np_nfa, entity_end, sent_end):
    if entity_end >= sent_end or tokens[entity_end].tag is not Tag.COMMA:
        return None
    start = entity_end + 1
    stop = start
    while stop < sent_end and tokens[stop].tag is not Tag.COMMA and tokens[stop].word != ".":
        stop += 1
    ends = match_ends(np_nfa, tokens, start, stop)
    best = max((e for e in ends if e > start), default=None)
    if best is None:
        return None
    return (start, best)


# --------------------------------------------------------------------------
# Full pipeline

@dataclass(frozen=True)
class StageCounts:
    entities: int
    unique: int


@dataclass(frozen=True)
class CandidateReport:
    """Before/after weeding counts in the two-word / three-word,
    total / unique layout."""

    two_word_before: StageCounts
    two_word_after: StageCounts
    three_word_before: StageCounts
    three_word_after: StageCounts

    def to_dict(self) -> dict:
        def cell(c: StageCounts):
            return {"entities": c.entities, "unique": c.unique}
        return {
            "two_word": {"before": cell(self.two_word_before),
                         "after": cell(self.two_word_after)},
            "three_word": {"before": cell(self.three_word_before),
                           "after": cell(self.three_word_after)},
        }

    def format_table(self) -> str:
        header = ("stage\ttwo_word_entities\ttwo_word_unique"
                  "\tthree_word_entities\tthree_word_unique")
        rows = [
            ("pos_tagging_only", self.two_word_before, self.three_word_before),
            ("after_dictionary_weeding", self.two_word_after, self.three_word_after),
        ]
        lines = [header]
        for name, two, three in rows:
            lines.append(f"{name}\t{two.entities}\t{two.unique}"
                         f"\t{three.entities}\t{three.unique}")
        return "\n".join(lines)


def candidate_report(before: list[EntityCandidate],
                     after: list[EntityCandidate]) -> CandidateReport:
    def stage(cands, n):
        sized = [c for c in cands if len(c.words) == n]
        return StageCounts(sum(c.occurrences for c in sized), len(sized))
    return CandidateReport(
        two_word_before=stage(before, 2), two_word_after=stage(after, 2),
        three_word_before=stage(before, 3), three_word_after=stage(after, 3))


@dataclass
class CategorizedDescription:
    description: Description
    categories: list[Categorization] = field(default_factory=list)


@dataclass
class PipelineResult:
    report: CandidateReport
    entities: list[EntityCandidate]
    descriptions: list[CategorizedDescription]


def run_pipeline(corpus: list[TaggedDoc], lex: LexDB, np_grammar: PatternSet,
                 jobs: int = 1) -> PipelineResult:
    """Candidates -> weeding -> per-entity description extraction ->
    categorization, in deterministic corpus order."""
    before = extract_candidates(corpus)
    after = weed_candidates(before, lex)
    descriptions: list[CategorizedDescription] = []
    for cand in after:
        for desc in extract_descriptions(list(cand.words), corpus, np_grammar, jobs=jobs):
            descriptions.append(
                CategorizedDescription(desc, lex.categorize(list(desc.tokens))))
    return PipelineResult(candidate_report(before, after), after, descriptions)


# --------------------------------------------------------------------------
# Description records file

def format_description_record(desc: Description) -> str:
    return "\t".join([desc.entity_key, desc.kind, render_tagged(list(desc.tokens)),
                      desc.source, desc.date.isoformat(), desc.doc_id])


def write_descriptions(path: str | Path, descs: list[Description]) -> None:
    Path(path).write_text(
        "".join(format_description_record(d) + "\n" for d in descs), encoding="utf-8")


def read_descriptions(path: str | Path) -> list[Description]:
    out = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 6:
            from .errors import FormatError
            raise FormatError(f"{path}:{lineno}: expected 6 tab-separated fields")
        key, kind, tagged, source, date, doc_id = parts
        out.append(Description(entity_key=key, tokens=tuple(parse_tagged(tagged)),
                               kind=kind, source=source,
                               date=datetime.date.fromisoformat(date), doc_id=doc_id))
    return out
