"""Draft domain ontologies bootstrapped from a job-post corpus."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator

from .docstore import Document
from .embeddings import VectorStore
from .exceptions import ValidationError
from .ontology import Ontology, build_ontology
from .textkit import ngrams, tokenize

log = logging.getLogger(__name__)

DEFAULT_TOP_N = 200
DEFAULT_K = 12
MAX_ITER = 100
TOL = 1e-9


@dataclass(frozen=True)
class ConceptCandidateTable:
    entries: tuple[tuple[str, int], ...]
    corpus_size: int

    def __len__(self) -> int:
        return len(self.entries)

    def grams(self) -> list[str]:
        return [g for g, _ in self.entries]


@dataclass(frozen=True)
class Cluster:
    centroid: np.ndarray
    members: tuple[str, ...]


@dataclass(frozen=True)
class ClusterSet:
    k: int
    clusters: tuple[Cluster, ...]
    inertia_history: tuple[float, ...] = ()
    n_iter: int = 0
    excluded: tuple[str, ...] = field(default=())


def _doc_text(doc) -> str:
    return doc.full_text() if isinstance(doc, Document) else str(doc)


def harvest_candidates(corpus: Iterable, top_n: int = DEFAULT_TOP_N) -> ConceptCandidateTable:
    """Corpus-wide counts of stop-free 1..3-grams, top ``top_n`` by count.

    Ties go to the longer gram, then alphabetical order, so a phrase ranks
    ahead of the words it always co-occurs with.
    """
    docs = list(corpus)
    if not docs:
        raise ValidationError("empty corpus")
    if top_n < 1:
        raise ValueError("top_n must be >= 1")
    counts: Counter[str] = Counter()
    for doc in docs:
        counts.update(g.text for g in ngrams(tokenize(_doc_text(doc)), 3))
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], -kv[0].count(" "), kv[0]))[:top_n]
    return ConceptCandidateTable(tuple(ranked), len(docs))


def _inertia(X, centroids, labels) -> float:
    return float(((X - centroids[labels]) ** 2).sum())


def _init_plus_plus(X: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    centers = [X[rng.integers(len(X))]]
    for _ in range(1, k):
        d2 = np.min(((X[:, None, :] - np.array(centers)[None]) ** 2).sum(-1), axis=1)
        total = d2.sum()
        if total == 0:
            centers.append(X[rng.integers(len(X))])
        else:
            centers.append(X[rng.choice(len(X), p=d2 / total)])
    return np.array(centers)


def kmeans(X: np.ndarray, k: int, seed: int = 0, max_iter: int = MAX_ITER, tol: float = TOL):
    """Seeded Lloyd iterations with k-means++ start.

    Empty clusters are refilled with the point of the largest cluster that
    lies farthest from its centroid.  Returns ``(labels, centroids,
    inertia_history, n_iter)``; the history is non-increasing.
    """
    X = np.asarray(X, dtype=np.float64)
    n = len(X)
    if not 1 <= k <= n:
        raise ValidationError(f"k={k} must be in [1, {n}]")
    rng = np.random.default_rng(seed)
    centroids = _init_plus_plus(X, k, rng)
    history = []
    labels = None
    it = 0
    for it in range(1, max_iter + 1):
        d2 = ((X[:, None, :] - centroids[None]) ** 2).sum(-1)
        labels = np.argmin(d2, axis=1)
        for c in range(k):
            if not np.any(labels == c):
                sizes = np.bincount(labels, minlength=k)
                big = int(np.argmax(sizes))
                idx = np.flatnonzero(labels == big)
                far = idx[int(np.argmax(d2[idx, big]))]
                labels[far] = c
        new = np.array([X[labels == c].mean(axis=0) for c in range(k)])
        history.append(_inertia(X, new, labels))
        shift = float(np.max(np.linalg.norm(new - centroids, axis=1)))
        centroids = new
        if shift < tol:
            break
    return labels, centroids, tuple(history), it


def cluster_candidates(table: ConceptCandidateTable, vs: VectorStore, k: int = DEFAULT_K, seed: int = 0) -> ClusterSet:
    """k-means over the phrase vectors of the harvested n-grams."""
    grams, rows, excluded = [], [], []
    for g in table.grams():
        vec = vs.phrase_vector(g)
        if vec is None:
            excluded.append(g)
            continue
        grams.append(g)
        rows.append(vec)
    if excluded:
        log.info("excluded %d out-of-vocabulary candidates", len(excluded))
    if not grams:
        raise ValidationError("no candidate has a vector")
    X = np.array(rows)
    labels, centroids, history, n_iter = kmeans(X, k, seed)
    clusters = tuple(
        Cluster(centroids[c], tuple(grams[i] for i in np.flatnonzero(labels == c))) for c in range(k)
    )
    return ClusterSet(k, clusters, history, n_iter, tuple(excluded))


def emit_draft_ontology(cs: ClusterSet, vs: VectorStore | None = None, name: str = "draft") -> Ontology:
    """One parent per cluster, members attached as children via super_topic.

    The parent is labelled after the member closest to the centroid, with a
    ``(group)`` suffix; a singleton cluster becomes a lone concept.
    """
    if not cs.clusters:
        raise ValidationError("no clusters to emit")
    declarations: dict[str, list] = {}
    triples = []
    for cl in cs.clusters:
        if not cl.members:
            continue
        if len(cl.members) == 1:
            declarations.setdefault(cl.members[0], [])
            continue
        if vs is not None:
            dists = [float(np.linalg.norm(vs.phrase_vector(m) - cl.centroid)) for m in cl.members]
            head = min(zip(dists, cl.members))[1]
        else:
            head = sorted(cl.members)[0]
        parent = f"{head} (group)"
        suffix = 2
        while parent in declarations or parent in cl.members:
            parent = f"{head} (group {suffix})"
            suffix += 1
        declarations[parent] = []
        for m in cl.members:
            declarations.setdefault(m, [])
            triples.append((m, "super_topic", parent))
    return build_ontology(sorted(declarations.items()), triples, name=name)


class TaxonomyBuilder(BaseEstimator):
    """Corpus -> candidate table -> clusters -> draft Ontology.

    After ``fit``: ``table_``, ``clusters_`` and ``ontology_``.
    """

    def __init__(self, vectors=None, top_n=DEFAULT_TOP_N, n_clusters=DEFAULT_K, random_state=0):
        self.vectors = vectors
        self.top_n = top_n
        self.n_clusters = n_clusters
        self.random_state = random_state

    def fit(self, corpus: Sequence, y=None):
        if not isinstance(self.vectors, VectorStore):
            raise TypeError("vectors must be a VectorStore")
        self.table_ = harvest_candidates(corpus, self.top_n)
        self.clusters_ = cluster_candidates(self.table_, self.vectors, self.n_clusters, self.random_state)
        self.ontology_ = emit_draft_ontology(self.clusters_, self.vectors)
        return self

    def fit_transform(self, corpus, y=None) -> Ontology:
        return self.fit(corpus).ontology_
