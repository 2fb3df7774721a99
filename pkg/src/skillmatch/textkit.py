"""Deterministic text primitives.

Tokenization, stop-word flags, n-gram windows, a coarse part-of-speech
lexicon with suffix fallback, a noun-phrase chunker and normalized
Levenshtein similarity.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Iterator, Sequence

COARSE_TAGS = ("noun", "adjective", "verb", "other")

_WORD = r"[^\W_]{1,3}(?:/[^\W_]{1,3})+(?![^\W_])|[^\W_]+(?:[.\-'’][^\W_]+)*[+#]*"
_BOUNDARY = r"[.,;:!?()\[\]{}|/\\•·\n\r\"]"
_TOKEN_RE = re.compile(rf"(?P<word>{_WORD})|(?P<sep>{_BOUNDARY})")

_ADJ_SUFFIXES = ("ous", "ive", "ical", "al", "ic", "able", "ible", "ful", "less", "ish")
_VERB_SUFFIXES = ("ize", "ise", "ized", "ised", "ed")


def _read_data(name: str) -> list[str]:
    text = resources.files("skillmatch.data").joinpath(name).read_text(encoding="utf-8")
    return [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]


@lru_cache(maxsize=None)
def default_stopwords() -> frozenset[str]:
    """The shipped stop-word list."""
    return frozenset(ln.strip() for ln in _read_data("stopwords.txt"))


@lru_cache(maxsize=None)
def default_lexicon() -> dict[str, str]:
    """The shipped word -> coarse tag lexicon."""
    return load_lexicon_lines(_read_data("lexicon.tsv"))


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(
            ln.strip().lower() for ln in fh if ln.strip() and not ln.startswith("#")
        )


def load_lexicon_lines(lines: Sequence[str]) -> dict[str, str]:
    lex = {}
    for ln in lines:
        word, _, tag = ln.rstrip("\n").partition("\t")
        tag = tag.strip()
        if tag not in COARSE_TAGS:
            raise ValueError(f"unknown coarse tag {tag!r} for {word!r}")
        lex[word.strip().lower()] = tag
    return lex


def load_lexicon(path) -> dict[str, str]:
    with open(path, encoding="utf-8") as fh:
        return load_lexicon_lines([ln for ln in fh if ln.strip() and not ln.startswith("#")])


@dataclass(frozen=True)
class Token:
    surface: str
    lower: str
    is_stopword: bool
    coarse_pos: str
    boundary: bool = False


@dataclass(frozen=True)
class TokenStream:
    tokens: tuple[Token, ...]

    def __iter__(self) -> Iterator[Token]:
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def __getitem__(self, i):
        return self.tokens[i]

    def content_words(self) -> list[str]:
        return [t.lower for t in self.tokens if not t.is_stopword]


@dataclass(frozen=True)
class NGram:
    text: str
    n: int
    start: int = 0


def guess_tag(word: str, lexicon: dict[str, str] | None = None) -> str:
    lex = default_lexicon() if lexicon is None else lexicon
    if word in lex:
        return lex[word]
    if not any(ch.isalpha() for ch in word):
        return "other"
    if word.endswith("ly") and len(word) > 4:
        return "other"
    if word.endswith(_VERB_SUFFIXES) and len(word) > 4:
        return "verb"
    if word.endswith(_ADJ_SUFFIXES) and len(word) > 4:
        return "adjective"
    return "noun"


def tokenize(text: str, stopwords=None, lexicon=None) -> TokenStream:
    """Split ``text`` into word and boundary tokens.

    Punctuation and line breaks become boundary tokens; they are flagged as
    stop words so that n-gram windows and chunks never cross them.
    """
    stops = default_stopwords() if stopwords is None else stopwords
    out = []
    for m in _TOKEN_RE.finditer(text):
        if m.lastgroup == "sep":
            out.append(Token(m.group(), m.group(), True, "other", boundary=True))
            continue
        surface = m.group()
        lower = surface.lower()
        is_stop = lower in stops
        pos = "other" if is_stop else guess_tag(lower, lexicon)
        out.append(Token(surface, lower, is_stop, pos))
    return TokenStream(tuple(out))


def _runs(tokens: Sequence[Token]) -> Iterator[tuple[int, int]]:
    """Yield [start, stop) spans of consecutive non-stop tokens."""
    start = None
    for i, tok in enumerate(tokens):
        if tok.is_stopword:
            if start is not None:
                yield start, i
            start = None
        elif start is None:
            start = i
    if start is not None:
        yield start, len(tokens)


def ngrams(ts: TokenStream, max_n: int = 3) -> list[NGram]:
    """All contiguous windows of non-stop tokens with length <= ``max_n``.

    Ordered by n, then by position in the stream.
    """
    if not 1 <= max_n <= 3:
        raise ValueError(f"max_n must be in [1, 3], got {max_n}")
    toks = ts.tokens
    spans = list(_runs(toks))
    out = []
    for n in range(1, max_n + 1):
        for lo, hi in spans:
            for i in range(lo, hi - n + 1):
                out.append(NGram(" ".join(t.lower for t in toks[i:i + n]), n, i))
    return out


def chunk_noun_phrases(ts: TokenStream) -> list[NGram]:
    """Maximal ``adjective* noun+`` spans.

    ``n`` on the returned grams is the chunk length, which may exceed 3.
    """
    toks = ts.tokens
    out = []
    i = 0
    while i < len(toks):
        j = i
        while j < len(toks) and not toks[j].is_stopword and toks[j].coarse_pos == "adjective":
            j += 1
        k = j
        while k < len(toks) and not toks[k].is_stopword and toks[k].coarse_pos == "noun":
            k += 1
        if k > j:
            out.append(NGram(" ".join(t.lower for t in toks[i:k]), k - i, i))
            i = k
        else:
            i = max(j, i + 1)
    return out


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit costs."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


def lev_similarity(a: str, b: str) -> float:
    """``1 - distance / max(len)``; 1.0 for two empty strings."""
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return 1.0 - edit_distance(a, b) / longest


def max_edits(length: int, min_sim: float) -> int:
    """Largest edit count a string of ``length`` may absorb at ``min_sim``."""
    # small epsilon guards against 1 - k/n landing a hair under min_sim
    return int((1.0 - min_sim) * length + 1e-12)
