"""Plain-text word vectors: loading, cosine similarity, nearest neighbours."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .exceptions import NotFoundError, ValidationError

log = logging.getLogger(__name__)


class ZeroNormError(ValidationError):
    """Cosine requested against an all-zero vector."""


class Neighbor(NamedTuple):
    word: str
    similarity: float


class Centroid(NamedTuple):
    vector: np.ndarray
    n_used: int
    n_oov: int
    degenerate: bool


@dataclass(frozen=True, eq=False)
class VectorStore:
    """Immutable word -> vector table.

    Vectors are float64 rows of ``matrix``; ``index`` maps word to row.
    """

    words: tuple[str, ...]
    matrix: np.ndarray
    index: dict

    def __post_init__(self):
        if self.matrix.ndim != 2 or self.matrix.shape[0] != len(self.words):
            raise ValidationError("matrix shape does not match vocabulary")
        if self.matrix.shape[1] < 1:
            raise ValidationError("vector dimension must be >= 1")
        self.matrix.setflags(write=False)
        norms = np.linalg.norm(self.matrix, axis=1)
        norms.setflags(write=False)
        object.__setattr__(self, "_norms", norms)

    @classmethod
    def from_dict(cls, entries: dict[str, Sequence[float]]) -> "VectorStore":
        words = tuple(entries)
        if not words:
            raise ValidationError("empty vector store")
        mat = np.array([np.asarray(entries[w], dtype=np.float64) for w in words])
        return cls(words, mat, {w: i for i, w in enumerate(words)})

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word) -> bool:
        return word in self.index

    def vector(self, word: str) -> np.ndarray:
        try:
            return self.matrix[self.index[word]]
        except KeyError:
            raise NotFoundError(f"out-of-vocabulary word: {word!r}") from None

    def phrase_vector(self, phrase: str) -> np.ndarray | None:
        """Vector for a space-separated phrase.

        A joined ``a_b`` entry is used when present; otherwise the centroid of
        the token vectors, or ``None`` if any token is out of vocabulary.
        """
        if phrase in self.index:
            return self.matrix[self.index[phrase]]
        parts = phrase.split()
        joined = "_".join(parts)
        if joined in self.index:
            return self.matrix[self.index[joined]]
        if not parts or any(p not in self.index for p in parts):
            return None
        return self.matrix[[self.index[p] for p in parts]].mean(axis=0)


def load_vectors(path) -> VectorStore:
    """Read ``word v1 .. vd`` lines; an optional ``count dim`` header is skipped."""
    entries: dict[str, np.ndarray] = {}
    dim = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.rstrip("\n").split(" ")
            parts = [p for p in parts if p]
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2 and all(p.isdigit() for p in parts):
                continue
            if dim is None:
                dim = len(parts) - 1
                if dim < 1:
                    raise ValidationError(f"{path}:{lineno}: no vector components")
            if len(parts) - 1 != dim:
                raise ValidationError(
                    f"{path}:{lineno}: expected {dim} components, got {len(parts) - 1}"
                )
            word = parts[0]
            try:
                vec = np.array([float(x) for x in parts[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ValidationError(f"{path}:{lineno}: {exc}") from None
            if word in entries:
                warnings.warn(f"{path}:{lineno}: duplicate word {word!r}, last occurrence wins")
                del entries[word]
            entries[word] = vec
    if not entries:
        raise ValidationError(f"{path}: empty vector file")
    return VectorStore.from_dict(entries)


def cosine(a, b) -> float:
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValidationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("cosine undefined for a zero-norm vector")
    return float(np.dot(a, b) / (na * nb))


def top_k(store: VectorStore, query, k: int, exclude: Iterable[str] = ()) -> list[Neighbor]:
    """The ``k`` most cosine-similar words, descending, ties by word.

    String queries exclude the query word itself.  Zero-norm rows never rank.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    skip = set(exclude)
    if isinstance(query, str):
        qvec = store.vector(query)
        skip.add(query)
    else:
        qvec = np.asarray(query, dtype=np.float64)
    qn = float(np.linalg.norm(qvec))
    if qn == 0.0:
        raise ZeroNormError("top_k query has zero norm")
    norms = store._norms
    with np.errstate(divide="ignore", invalid="ignore"):
        sims = (store.matrix @ qvec) / (norms * qn)
    valid = norms > 0
    for w in skip:
        if w in store.index:
            valid[store.index[w]] = False
    idx = np.flatnonzero(valid)
    if idx.size > k:
        # keep everything tied with the k-th score so the word tie-break is exact
        kth = np.partition(-sims[idx], k - 1)[k - 1]
        idx = idx[-sims[idx] <= kth]
    order = sorted(idx.tolist(), key=lambda i: (-sims[i], store.words[i]))
    return [Neighbor(store.words[i], float(sims[i])) for i in order[:k]]


def centroid(words: Sequence[str], store: VectorStore) -> Centroid:
    """Mean vector of the in-vocabulary ``words``."""
    rows = [store.index[w] for w in words if w in store.index]
    if not rows:
        raise NotFoundError("no in-vocabulary word to average")
    vec = store.matrix[rows].mean(axis=0)
    return Centroid(vec, len(rows), len(words) - len(rows), bool(np.linalg.norm(vec) == 0.0))
