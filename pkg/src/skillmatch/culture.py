"""Organisational-culture profiling on the six value dimensions.

The culture graph is a tree: dimension -> two antonym poles -> descriptors
-> descriptor terms.  A text is profiled by the cosine between each term
and the text centroid (negatives clamped to 0), averaged per pole.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .embeddings import VectorStore, cosine
from .exceptions import ValidationError
from .textkit import tokenize

DIMENSIONS = (
    "Power Distance",
    "Individualism",
    "Uncertainty Avoidance",
    "Masculinity & Femininity",
    "Long Term Orientation",
    "Indulgence Vs Restraint",
)
N_POLES = 2 * len(DIMENSIONS)


class CultureProfileError(ValidationError):
    """The text carries no usable content for profiling."""


@dataclass(frozen=True)
class Pole:
    name: str
    dimension: str
    descriptors: tuple[tuple[str, tuple[str, ...]], ...]

    def terms(self) -> list[str]:
        return [t for _, terms in self.descriptors for t in terms]


@dataclass(frozen=True)
class CultureGraph:
    poles: tuple[Pole, ...]

    @property
    def pole_names(self) -> list[str]:
        return [p.name for p in self.poles]

    @property
    def dimensions(self) -> list[str]:
        return list(dict.fromkeys(p.dimension for p in self.poles))

    @classmethod
    def from_dict(cls, tree: dict) -> "CultureGraph":
        if not isinstance(tree, dict) or len(tree) != len(DIMENSIONS):
            n = len(tree) if isinstance(tree, dict) else "non-mapping"
            raise ValidationError(f"culture graph needs exactly {len(DIMENSIONS)} dimensions, got {n}")
        if set(tree) != set(DIMENSIONS):
            raise ValidationError(f"dimension names must be {list(DIMENSIONS)}, got {sorted(tree)}")
        poles = []
        seen_terms: dict[str, str] = {}
        for dim in DIMENSIONS:
            pole_map = tree[dim]
            if not isinstance(pole_map, dict) or len(pole_map) != 2:
                raise ValidationError(f"{dim}: exactly two antonym poles required")
            for pole_name, descriptors in pole_map.items():
                if not isinstance(descriptors, dict) or not descriptors:
                    raise ValidationError(f"{dim} / {pole_name}: pole has no descriptors")
                descs = []
                for desc, terms in descriptors.items():
                    if not isinstance(terms, list) or not terms:
                        raise ValidationError(f"{dim} / {pole_name} / {desc}: descriptor has no terms")
                    for t in terms:
                        if not isinstance(t, str) or not t.strip():
                            raise ValidationError(f"{dim} / {pole_name} / {desc}: empty term")
                    descs.append((desc, tuple(t.strip() for t in terms)))
                    key = f"{pole_name}/{desc}"
                    if desc in seen_terms and seen_terms[desc] != key:
                        raise ValidationError(f"descriptor {desc!r} appears under two poles")
                    seen_terms[desc] = key
                poles.append(Pole(pole_name, dim, tuple(descs)))
        return cls(tuple(poles))

    def to_dict(self) -> dict:
        out: dict = {}
        for p in self.poles:
            out.setdefault(p.dimension, {})[p.name] = {d: list(t) for d, t in p.descriptors}
        return out


def load_culture_graph(path=None) -> CultureGraph:
    """Read a culture graph JSON file; ``None`` loads the shipped default."""
    if path is None:
        text = resources.files("skillmatch.data").joinpath("culture_graph.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"culture graph is not valid JSON: {exc}") from None
    return CultureGraph.from_dict(tree)


@dataclass(frozen=True)
class CultureProfile:
    pole_values: np.ndarray
    coverage: float
    pole_names: tuple[str, ...] = ()

    def __post_init__(self):
        v = np.clip(np.asarray(self.pole_values, dtype=np.float64), 0.0, 1.0)
        if v.shape != (N_POLES,):
            raise ValidationError(f"profile needs {N_POLES} pole values, got shape {v.shape}")
        v.setflags(write=False)
        object.__setattr__(self, "pole_values", v)

    def as_dict(self) -> dict[str, float]:
        names = self.pole_names or tuple(f"pole_{i}" for i in range(N_POLES))
        return {n: float(x) for n, x in zip(names, self.pole_values)}


def _word_rows(text: str, vs: VectorStore) -> tuple[list[int], int]:
    """Vocabulary rows of the content words in ``text`` and the content-word count.

    Hyphenated words missing from the vocabulary fall back to their parts.
    """
    rows = []
    words = tokenize(text).content_words()
    for w in words:
        if w in vs.index:
            rows.append(vs.index[w])
        elif "-" in w:
            rows.extend(vs.index[p] for p in w.split("-") if p in vs.index)
    return rows, len(words)


def _mean_vector(rows: list[int], vs: VectorStore) -> np.ndarray | None:
    if not rows:
        return None
    vec = vs.matrix[rows].mean(axis=0)
    return vec if np.any(vec) else None


def profile(text: str, cg: CultureGraph, vs: VectorStore) -> CultureProfile:
    """Profile ``text`` onto the poles of ``cg``.

    The text vector is the mean of its content-word vectors, so word order
    and repetition of the whole text do not matter.
    """
    rows, n_words = _word_rows(text, vs)
    if n_words == 0:
        raise CultureProfileError("text is empty after stop-word removal")
    text_vec = _mean_vector(sorted(set(rows)), vs)
    if text_vec is None:
        raise CultureProfileError("text has no in-vocabulary content words")
    values = np.zeros(len(cg.poles))
    n_terms = n_found = 0
    for i, pole in enumerate(cg.poles):
        sims = []
        for term in pole.terms():
            n_terms += 1
            tvec = _mean_vector(_word_rows(term, vs)[0], vs)
            if tvec is None:
                continue
            n_found += 1
            sims.append(max(0.0, cosine(tvec, text_vec)))
        values[i] = float(np.mean(sims)) if sims else 0.0
    return CultureProfile(values, n_found / n_terms if n_terms else 0.0, tuple(cg.pole_names))


def culture_match(p1, p2) -> float:
    """``1 - euclidean / sqrt(12)``: 1 for identical profiles, 0 for opposite corners."""
    a = p1.pole_values if isinstance(p1, CultureProfile) else np.asarray(p1, dtype=np.float64)
    b = p2.pole_values if isinstance(p2, CultureProfile) else np.asarray(p2, dtype=np.float64)
    if a.shape != (N_POLES,) or b.shape != (N_POLES,):
        raise ValidationError(f"profiles must have {N_POLES} values")
    d = float(np.sqrt(np.sum((a - b) ** 2)))
    return max(0.0, 1.0 - d / math.sqrt(N_POLES))


def pole_table(p_cv: CultureProfile, p_job: CultureProfile) -> list[dict]:
    """Per-pole values and signed deltas (cv - job) for reports."""
    names = p_job.pole_names or p_cv.pole_names
    return [
        {"pole": n, "cv": float(a), "job": float(b), "delta": float(a - b)}
        for n, a, b in zip(names, p_cv.pole_values, p_job.pole_values)
    ]


class CultureProfiler(TransformerMixin, BaseEstimator):
    """Map texts to 12-column pole-affinity matrices."""

    def __init__(self, culture_graph=None, vectors=None):
        self.culture_graph = culture_graph
        self.vectors = vectors

    def fit(self, X=None, y=None):
        if not isinstance(self.vectors, VectorStore):
            raise TypeError("vectors must be a VectorStore")
        self.graph_ = self.culture_graph if self.culture_graph is not None else load_culture_graph()
        self.pole_names_ = tuple(self.graph_.pole_names)
        return self

    def transform(self, X) -> np.ndarray:
        from sklearn.utils.validation import check_is_fitted

        from .validation import check_texts

        check_is_fitted(self, "graph_")
        texts = check_texts(X)
        out = np.zeros((len(texts), N_POLES))
        for i, t in enumerate(texts):
            out[i] = profile(t, self.graph_, self.vectors).pole_values
        return out

    def get_feature_names_out(self, input_features=None):
        from sklearn.utils.validation import check_is_fitted

        check_is_fitted(self, "graph_")
        return np.asarray(self.pole_names_, dtype=object)
