import pytest

from profiledb.extract import (CandidateReport, EntityCandidate, candidate_report,
                               extract_candidates, extract_descriptions,
                               normalize_key, read_descriptions, run_pipeline,
                               weed_candidates, write_descriptions)
from profiledb.patterns import compile_entity_pattern, find_matches
from profiledb.text import parse_tagged

from .conftest import doc


class TestCandidates:
    def test_simple_pair(self):
        cands = extract_candidates([doc("Bill@NP Clinton@NP said@VB")])
        assert [(c.words, c.occurrences) for c in cands] == [(("Bill", "Clinton"), 1)]

    def test_no_proper_nouns(self):
        assert extract_candidates([doc("the@DT capital@NN")]) == []

    def test_three_word_run_gives_all_ngrams(self):
        cands = extract_candidates([doc("Palestine@NP Liberation@NP Organization@NP")])
        assert {c.words for c in cands} == {
            ("Palestine", "Liberation"), ("Liberation", "Organization"),
            ("Palestine", "Liberation", "Organization")}

    def test_counts_aggregate_across_docs(self):
        d1 = doc("Bill@NP Clinton@NP said@VB", doc_id="a")
        d2 = doc("Bill@NP Clinton@NP won@VB", doc_id="b")
        cands = extract_candidates([d1, d2])
        assert cands == [EntityCandidate(("Bill", "Clinton"), 2)]

    def test_runs_broken_by_non_np(self):
        cands = extract_candidates([doc("South@NP Africa@NP 's@$ leader@NN Nelson@NP Mandela@NP said@VB")])
        assert {c.words for c in cands} == {("South", "Africa"), ("Nelson", "Mandela")}


class TestWeeding:
    def test_common_words_removed(self, lexdb):
        cands = [EntityCandidate(("Prime", "Minister"), 4),
                 EntityCandidate(("Egyptian", "President"), 2),
                 EntityCandidate(("Bill", "Clinton"), 3)]
        kept = weed_candidates(cands, lexdb)
        assert [c.words for c in kept] == [("Bill", "Clinton")]
        assert kept[0].occurrences == 3

    def test_empty(self, lexdb):
        assert weed_candidates([], lexdb) == []

    def test_soundness(self, lexdb, corpus):
        before = extract_candidates(corpus)
        for cand in weed_candidates(before, lexdb):
            assert not any(lexdb.is_common(w) for w in cand.words)

    def test_rice_university_is_weeded(self, lexdb):
        kept = weed_candidates([EntityCandidate(("Rice", "University"), 5)], lexdb)
        assert kept == []


class TestDescriptions:
    def test_apposition(self, np_grammar):
        d = doc("Addis@NP Ababa@NP ,@, the@DT Ethiopian@JJ capital@NN ,@, on@IN Tuesday@NP .@PUNCT")
        descs = extract_descriptions(["Addis", "Ababa"], [d], np_grammar)
        assert [(x.kind, x.surface()) for x in descs] == \
            [("apposition", "the Ethiopian capital")]

    def test_premodifier(self, np_grammar):
        d = doc("Police@NNS detained@VB maverick@JJ French@JJ ex-soccer@JJ boss@NN "
                "Bernard@NP Tapie@NP .@PUNCT")
        descs = extract_descriptions(["Bernard", "Tapie"], [d], np_grammar)
        assert [(x.kind, x.surface()) for x in descs] == \
            [("premodifier", "maverick French ex-soccer boss")]

    def test_of_attachment(self, np_grammar):
        d = doc("Gilberto@NP Rodriguez@NP Orejuela@NP ,@, the@DT head@NN of@IN "
                "the@DT Cali@NP cocaine@NN cartel@NN ,@, said@VB .@PUNCT")
        descs = extract_descriptions(["Gilberto", "Rodriguez", "Orejuela"], [d], np_grammar)
        assert [x.surface() for x in descs] == ["the head of the Cali cocaine cartel"]

    def test_absent_entity(self, np_grammar):
        assert extract_descriptions(["Nobody", "Here"],
                                    [doc("a@DT b@NN .@PUNCT")], np_grammar) == []

    def test_provenance_carried(self, np_grammar, corpus):
        descs = extract_descriptions(["Silvio", "Berlusconi"], corpus, np_grammar)
        assert len(descs) == 1
        d = descs[0]
        assert (d.doc_id, d.source, d.date.isoformat()) == ("d05", "reuters", "1995-04-04")
        assert d.entity_key == "silvio berlusconi"

    def test_apposition_stops_at_comma(self, np_grammar):
        d = doc("Boerge@NP Ousland@NP ,@, 33@CD ,@, completed@VB the@DT trek@NN .@PUNCT")
        descs = extract_descriptions(["Boerge", "Ousland"], [d], np_grammar)
        assert [x.surface() for x in descs] == ["33"]

    def test_jobs_parallel_is_deterministic(self, np_grammar, corpus):
        serial = extract_descriptions(["John", "Major"], corpus, np_grammar)
        parallel = extract_descriptions(["John", "Major"], corpus, np_grammar, jobs=4)
        assert serial == parallel


class TestDescriptionInvariants:
    def test_spans_relocate_and_shapes_hold(self, np_grammar, lexdb, corpus):
        result = run_pipeline(corpus, lexdb, np_grammar)
        by_id = {d.id: d for d in corpus}
        for item in result.descriptions:
            desc = item.description
            tokens = by_id[desc.doc_id].tokens
            words = [t.word for t in tokens]
            sub = [t.word for t in desc.tokens]
            # the tokens occur contiguously in their source document
            assert any(words[i:i + len(sub)] == sub
                       for i in range(len(words) - len(sub) + 1))
            if desc.kind == "premodifier":
                assert all(t.word != "," for t in desc.tokens)
            else:
                entity_words = desc.entity_key.split()
                lowered = [w.lower() for w in sub]
                assert not any(lowered[i:i + len(entity_words)] == entity_words
                               for i in range(len(lowered)))

    def test_adjacency(self, np_grammar, lexdb, corpus):
        result = run_pipeline(corpus, lexdb, np_grammar)
        by_id = {d.id: d for d in corpus}
        for item in result.descriptions:
            desc = item.description
            document = by_id[desc.doc_id]
            spans = find_matches(
                compile_entity_pattern([w for w in desc.entity_key.split()]), document)
            words = [t.word for t in document.tokens]
            sub = [t.word for t in desc.tokens]
            starts = [i for i in range(len(words)) if words[i:i + len(sub)] == sub]
            if desc.kind == "premodifier":
                assert any(i + len(sub) == s.start for i in starts for s in spans)
            else:
                assert any(i == s.end + 1 for i in starts for s in spans)


class TestPipeline:
    def test_empty_corpus(self, lexdb, np_grammar):
        result = run_pipeline([], lexdb, np_grammar)
        assert result.entities == [] and result.descriptions == []

    def test_repeat_apposition_counts_twice(self, lexdb, np_grammar):
        d1 = doc("Addis@NP Ababa@NP ,@, the@DT Ethiopian@JJ capital@NN ,@, grew@VB .@PUNCT",
                 doc_id="a")
        d2 = doc("Addis@NP Ababa@NP ,@, the@DT Ethiopian@JJ capital@NN ,@, grew@VB .@PUNCT",
                 doc_id="b")
        result = run_pipeline([d1, d2], lexdb, np_grammar)
        assert len(result.entities) == 1
        assert len(result.descriptions) == 2

    def test_determinism(self, lexdb, np_grammar, corpus):
        one = run_pipeline(corpus, lexdb, np_grammar)
        two = run_pipeline(corpus, lexdb, np_grammar)
        assert [i.description for i in one.descriptions] == \
            [i.description for i in two.descriptions]
        assert one.report == two.report

    def test_report_shape(self, lexdb, np_grammar, corpus):
        report = run_pipeline(corpus, lexdb, np_grammar).report
        table = report.format_table()
        assert "pos_tagging_only" in table and "after_dictionary_weeding" in table
        d = report.to_dict()
        for size in ("two_word", "three_word"):
            for stage in ("before", "after"):
                assert {"entities", "unique"} == set(d[size][stage])
        assert d["two_word"]["after"]["unique"] <= d["two_word"]["before"]["unique"]


class TestRecordsFile:
    def test_round_trip(self, tmp_path, lexdb, np_grammar, corpus):
        descs = [i.description for i in run_pipeline(corpus, lexdb, np_grammar).descriptions]
        path = tmp_path / "descriptions.tsv"
        write_descriptions(path, descs)
        assert read_descriptions(path) == descs
