import re
from functools import lru_cache

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skillmatch.textkit import (
    Token,
    TokenStream,
    chunk_noun_phrases,
    default_stopwords,
    edit_distance,
    lev_similarity,
    max_edits,
    ngrams,
    tokenize,
)


def _ref_distance(a: str, b: str) -> int:
    # plain recursive definition, memoised
    @lru_cache(maxsize=None)
    def d(i, j):
        if i == 0:
            return j
        if j == 0:
            return i
        return min(d(i - 1, j) + 1, d(i, j - 1) + 1, d(i - 1, j - 1) + (a[i - 1] != b[j - 1]))

    return d(len(a), len(b))


def _stream(pairs):
    return TokenStream(tuple(Token(w, w.lower(), False, tag) for w, tag in pairs))


class TestTokenize:
    def test_empty(self):
        assert len(tokenize("")) == 0

    def test_two_tokens_lowered(self):
        ts = tokenize("Machine Learning")
        assert [t.lower for t in ts] == ["machine", "learning"]
        assert [t.surface for t in ts] == ["Machine", "Learning"]

    def test_stopword_flag(self):
        assert "the" in default_stopwords()
        ts = tokenize("the engineer")
        assert [t.is_stopword for t in ts] == [True, False]

    def test_punctuation_is_boundary(self):
        ts = tokenize("python, sql")
        assert [t.boundary for t in ts] == [False, True, False]

    @pytest.mark.parametrize("word", ["c++", "c#", "node.js", "a/b", "ci/cd", "scikit-learn"])
    def test_technical_tokens_kept_whole(self, word):
        assert [t.lower for t in tokenize(word)] == [word]


class TestNgrams:
    def test_pair(self):
        ts = _stream([("a", "noun"), ("b", "noun")])
        assert [g.text for g in ngrams(ts, 2)] == ["a", "b", "a b"]

    def test_single_token(self):
        assert [g.text for g in ngrams(tokenize("python"), 3)] == ["python"]

    def test_windows_match_enumeration(self):
        words = "deep learning models".split()
        expected = {" ".join(words[i:j]) for i in range(3) for j in range(i + 1, 4)}
        got = {g.text for g in ngrams(tokenize("deep learning models"), 3)}
        assert got == expected
        assert {"deep learning", "learning models", "deep learning models"} <= got

    def test_windows_do_not_cross_stopwords(self):
        got = {g.text for g in ngrams(tokenize("python and sql"), 3)}
        assert got == {"python", "sql"}

    def test_bad_max_n(self):
        with pytest.raises(ValueError):
            ngrams(tokenize("x"), 4)

    @given(st.integers(min_value=0, max_value=12))
    def test_count_for_stopfree_run(self, n):
        ts = _stream([(f"w{i}", "noun") for i in range(n)])
        expected = sum(max(n - k + 1, 0) for k in (1, 2, 3))
        assert len(ngrams(ts, 3)) == expected


class TestLevenshtein:
    def test_identity(self):
        assert lev_similarity("ontology", "ontology") == 1.0

    def test_plural(self):
        assert _ref_distance("clustering", "clusterings") == 1
        assert lev_similarity("clustering", "clusterings") == pytest.approx(1 - 1 / 11)

    def test_16_char_one_edit_below_threshold(self):
        sim = lev_similarity("machin learning", "machine learning")
        assert sim == pytest.approx(0.9375)
        assert sim < 0.94

    def test_max_edits(self):
        # 1 - 1/len >= 0.94 first holds at len 17
        assert max_edits(16, 0.94) == 0
        assert max_edits(17, 0.94) == 1
        assert max_edits(34, 0.94) == 2

    @settings(max_examples=200)
    @given(st.text("abcd", max_size=7), st.text("abcd", max_size=7))
    def test_matches_recursive_definition(self, a, b):
        assert edit_distance(a, b) == _ref_distance(a, b)

    @given(st.text(max_size=10), st.text(max_size=10))
    def test_symmetric_and_bounded(self, a, b):
        s = lev_similarity(a, b)
        assert s == lev_similarity(b, a)
        assert 0.0 <= s <= 1.0


class TestChunker:
    def test_adjective_noun(self):
        ts = _stream([("deep", "adjective"), ("learning", "noun")])
        assert [c.text for c in chunk_noun_phrases(ts)] == ["deep learning"]

    def test_verb_dropped(self):
        ts = _stream([("managed", "verb"), ("team", "noun")])
        assert [c.text for c in chunk_noun_phrases(ts)] == ["team"]

    def test_noun_run(self):
        ts = _stream([("distributed", "noun"), ("systems", "noun"), ("engineer", "noun")])
        assert [c.text for c in chunk_noun_phrases(ts)] == ["distributed systems engineer"]

    def test_lexicon_path(self):
        chunks = chunk_noun_phrases(tokenize("distributed systems engineer"))
        assert [c.text for c in chunks] == ["distributed systems engineer"]

    @given(st.lists(st.sampled_from(["adjective", "noun", "verb", "other"]), max_size=12))
    def test_agrees_with_regex_automaton(self, tags):
        ts = _stream([(f"w{i}", t) for i, t in enumerate(tags)])
        code = "".join({"adjective": "A", "noun": "N"}.get(t, "x") for t in tags)
        expected = [(m.start(), m.end() - m.start()) for m in re.finditer(r"A*N+", code)]
        assert [(c.start, c.n) for c in chunk_noun_phrases(ts)] == expected
