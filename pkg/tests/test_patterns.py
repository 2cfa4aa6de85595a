import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from profiledb.errors import CycleError, DanglingRef, EmptyEntity, ParseError
from profiledb.patterns import (Alt, Capture, Literal, PatternSet, Ref, Repeat,
                                Seq, TagIs, accepts, compile_entity_pattern,
                                find_matches, parse_pattern_defs)
from profiledb.text import Tag, Token, parse_tagged

from .conftest import doc
from .genpatterns import WORDS, TAGS, random_pattern_set, random_stream
from .oracle import accepts_brute, find_matches_brute


class TestParseDefs:
    def test_entity_line(self):
        ps = parse_pattern_defs("A = [Yy]asser@NP [Aa]rafat@NP")
        expr = ps.root()
        assert isinstance(expr, Seq) and len(expr.items) == 2
        assert expr.items[0] == Literal("Yasser", ci_first=True, tag=Tag.NP)
        assert expr.items[1] == Literal("Arafat", ci_first=True, tag=Tag.NP)

    def test_dangling_ref(self):
        with pytest.raises(DanglingRef, match="B"):
            parse_pattern_defs("A = {B}")

    def test_repeat_parse(self):
        ps = parse_pattern_defs("A = x@NN+")
        expr = ps.root()
        assert expr == Repeat(Literal("x", tag=Tag.NN), 1, None)

    def test_alternation_and_groups(self):
        ps = parse_pattern_defs("A = (x | y@NN)? z")
        assert accepts(ps, parse_tagged("z@NN"))
        assert accepts(ps, parse_tagged("x@VB z@NN"))
        assert accepts(ps, parse_tagged("y@NN z@JJ"))
        assert not accepts(ps, parse_tagged("y@VB z@NN"))

    def test_space_ignored_comma_is_tag(self):
        ps = parse_pattern_defs("A = x {SPACE} {COMMA} y")
        assert accepts(ps, parse_tagged("x@NN ,@, y@NN"))

    def test_cycle(self):
        with pytest.raises(CycleError):
            parse_pattern_defs("A = {B}\nB = {A}")

    def test_comments_and_multiple_defs(self):
        ps = parse_pattern_defs("# grammar\nROOT = {X} {X}\nX = a@NN | b@NN\n")
        assert ps.entry == "ROOT"
        assert accepts(ps, parse_tagged("a@NN b@NN"))

    def test_syntax_error_carries_line(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_pattern_defs("A = x\nB = )")


class TestEntityPattern:
    def test_first_letter_case_insensitive(self):
        pattern = compile_entity_pattern(["Yasser", "Arafat"])
        assert accepts(pattern, parse_tagged("Yasser@NP Arafat@NP"))
        assert accepts(pattern, parse_tagged("yasser@NP arafat@NP"))
        assert not accepts(pattern, parse_tagged("Yasser@NN Arafat@NP"))
        assert not accepts(pattern, parse_tagged("YASSER@NP Arafat@NP"))

    def test_single_word(self):
        assert accepts(compile_entity_pattern(["Dole"]), parse_tagged("dole@NP"))

    def test_empty_entity(self):
        with pytest.raises(EmptyEntity):
            compile_entity_pattern([])

    def test_match_in_stream(self):
        spans = find_matches(compile_entity_pattern(["Yasser", "Arafat"]),
                             doc("In@IN Gaza@NP Yasser@NP Arafat@NP said@VB"))
        assert [(m.start, m.end) for m in spans] == [(2, 4)]

    def test_exhaustive_small_alphabet(self):
        # a compiled 2-word pattern accepts exactly word-equal (modulo
        # first letter case), all-NP token pairs
        pattern = compile_entity_pattern(["Ab", "Cd"])
        words = ["Ab", "ab", "AB", "Cd", "cd", "xx"]
        tags = [Tag.NP, Tag.NN]
        for w1 in words:
            for t1 in tags:
                for w2 in words:
                    for t2 in tags:
                        stream = [Token(w1, t1), Token(w2, t2)]
                        expected = (w1 in ("Ab", "ab") and w2 in ("Cd", "cd")
                                    and t1 is Tag.NP and t2 is Tag.NP)
                        assert accepts(pattern, stream) == expected, stream


class TestFindMatches:
    def test_document_order_and_non_overlap(self):
        two = Alt((compile_entity_pattern(["John", "Major"]),
                   compile_entity_pattern(["Bill", "Clinton"])))
        d = doc("John@NP Major@NP met@VB Bill@NP Clinton@NP .@PUNCT")
        assert [(m.start, m.end) for m in find_matches(two, d)] == [(0, 2), (3, 5)]

    def test_empty_doc(self):
        assert find_matches(TagIs(Tag.NP), doc("")) == []

    def test_leftmost_longest(self):
        pattern = Repeat(TagIs(Tag.NP), 1, None)
        d = doc("a@NP b@NP c@VB d@NP")
        assert [(m.start, m.end) for m in find_matches(pattern, d)] == [(0, 2), (3, 4)]

    def test_never_crosses_sentences(self):
        pattern = Repeat(TagIs(Tag.NP), 1, None)
        d = doc("a@NP .@PUNCT b@NP c@NP")
        assert [(m.start, m.end) for m in find_matches(pattern, d)] == [(0, 1), (2, 4)]

    def test_capture_records_last_occurrence(self):
        pattern = Repeat(Capture("np", TagIs(Tag.NP)), 1, None)
        spans = find_matches(pattern, doc("a@NP b@NP c@NP said@VB"))
        assert len(spans) == 1
        assert spans[0].captures["np"] == (2, 3)

    def test_empty_matches_never_emitted(self):
        pattern = Repeat(TagIs(Tag.NP), 0, None)
        assert find_matches(pattern, doc("x@VB y@VB")) == []


class TestOracleEquivalence:
    def test_seeded_sample_agrees_with_brute_force(self):
        rng = random.Random(951321)
        for _ in range(150):
            ps = random_pattern_set(rng)
            d = doc(" ".join(f"{t.word}@{t.tag.value}" for t in random_stream(rng)) or "")
            assert [(m.start, m.end) for m in find_matches(ps, d)] == \
                find_matches_brute(ps, d), ps

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_property_random_seeds(self, seed):
        rng = random.Random(seed)
        ps = random_pattern_set(rng, max_defs=3, depth=2)
        d = doc(" ".join(f"{t.word}@{t.tag.value}"
                         for t in random_stream(rng, max_len=8)) or "")
        assert [(m.start, m.end) for m in find_matches(ps, d)] == \
            find_matches_brute(ps, d)

    def test_acceptance_agrees_on_substrings(self):
        rng = random.Random(7)
        for _ in range(50):
            ps = random_pattern_set(rng, max_defs=2, depth=2)
            stream = random_stream(rng, max_len=6)
            for i in range(len(stream) + 1):
                for j in range(i, len(stream) + 1):
                    assert accepts(ps, stream[i:j]) == \
                        accepts_brute(ps.root(), stream[i:j], ps.definitions)
