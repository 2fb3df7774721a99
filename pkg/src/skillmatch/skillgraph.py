"""Concept-graph extraction from free text against an ontology.

Two candidate sources feed one ranking: a syntactic pass that fuzzily maps
n-grams to ontology labels, and a semantic pass that maps the embedding
neighbours of noun-phrase n-grams to labels.  Candidates are scored by
frequency x diversity, cut at the elbow of the score curve, and enriched
with their direct super-topics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator, TransformerMixin

from .embeddings import VectorStore, top_k
from .ontology import Ontology, find_by_label
from .textkit import TokenStream, chunk_noun_phrases, ngrams, tokenize

DEFAULT_THRESHOLD = 0.94
DEFAULT_TOP_K = 10
ORIGINS = ("direct", "syntactic", "semantic", "expanded")


@dataclass(frozen=True)
class CandidateConcept:
    """A concept proposed by one of the extraction passes.

    ``sources`` holds the distinct n-grams that led to it, so ``diversity``
    is derived.  ``exact`` marks a label hit at similarity 1.0; ``direct``
    marks any syntactic hit.  ``provenance`` records semantic evidence as
    ``(ngram, neighbour word, cosine)`` triples.
    """

    concept_id: str
    frequency: int
    sources: frozenset[str]
    direct: bool = False
    exact: bool = False
    provenance: frozenset[tuple[str, str, float]] = frozenset()

    @property
    def diversity(self) -> int:
        return len(self.sources)

    @property
    def origin(self) -> str:
        if self.exact:
            return "direct"
        return "syntactic" if self.direct else "semantic"


@dataclass(frozen=True)
class ExtractionDiagnostics:
    n_ngrams: int = 0
    n_chunks: int = 0
    n_semantic_grams: int = 0
    n_oov_grams: int = 0


@dataclass(frozen=True)
class GraphNode:
    relevance: float
    origin: str


@dataclass(frozen=True)
class ConceptGraph:
    """Undirected concept graph. Edges are ``(a, b, relation)`` with ``a < b``."""

    nodes: dict[str, GraphNode] = field(default_factory=dict)
    edges: frozenset[tuple[str, str, str]] = frozenset()
    provenance: dict[str, tuple[tuple[str, str, float], ...]] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.nodes)

    def __bool__(self) -> bool:
        return bool(self.nodes)

    def node_ids(self) -> list[str]:
        return sorted(self.nodes)

    def to_dict(self) -> dict:
        return {
            "nodes": [
                {"id": n, "relevance": self.nodes[n].relevance, "origin": self.nodes[n].origin}
                for n in self.node_ids()
            ],
            "edges": [{"source": a, "target": b, "relation": r} for a, b, r in sorted(self.edges)],
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: dict) -> "ConceptGraph":
        nodes = {n["id"]: GraphNode(float(n["relevance"]), n["origin"]) for n in d.get("nodes", [])}
        edges = frozenset(_edge(e["source"], e["target"], e["relation"]) for e in d.get("edges", []))
        return cls(nodes, edges)


def _edge(a: str, b: str, rel: str) -> tuple[str, str, str]:
    return (a, b, rel) if a <= b else (b, a, rel)


def _hits(o: Ontology, text: str, threshold: float) -> list[tuple[str, float]]:
    """Equivalence-collapsed concept hits for one string, best similarity each."""
    best: dict[str, float] = {}
    for concept, sim in find_by_label(o, text, threshold):
        rep = o.representative(concept.id)
        if sim > best.get(rep, -1.0):
            best[rep] = sim
    return sorted(best.items())


class _Accumulator:
    def __init__(self):
        self.freq: dict[str, int] = {}
        self.sources: dict[str, set] = {}
        self.exact: dict[str, bool] = {}
        self.prov: dict[str, set] = {}

    def add(self, cid, source, exact=False, prov=None):
        self.freq[cid] = self.freq.get(cid, 0) + 1
        self.sources.setdefault(cid, set()).add(source)
        self.exact[cid] = self.exact.get(cid, False) or exact
        if prov is not None:
            self.prov.setdefault(cid, set()).add(prov)

    def result(self, direct: bool) -> list[CandidateConcept]:
        return [
            CandidateConcept(
                cid,
                self.freq[cid],
                frozenset(self.sources[cid]),
                direct=direct,
                exact=self.exact[cid],
                provenance=frozenset(self.prov.get(cid, ())),
            )
            for cid in sorted(self.freq)
        ]


def syntactic_extract(
    ts: TokenStream, o: Ontology, threshold: float = DEFAULT_THRESHOLD, max_n: int = 3
) -> list[CandidateConcept]:
    """Map every stop-free n-gram to ontology labels at ``threshold``."""
    acc = _Accumulator()
    cache: dict[str, list] = {}
    for gram in ngrams(ts, max_n):
        if gram.text not in cache:
            cache[gram.text] = _hits(o, gram.text, threshold)
        for cid, sim in cache[gram.text]:
            acc.add(cid, gram.text, exact=sim == 1.0)
    return acc.result(direct=True)


def semantic_extract(
    ts: TokenStream,
    o: Ontology,
    vs: VectorStore,
    k: int = DEFAULT_TOP_K,
    threshold: float = DEFAULT_THRESHOLD,
    diagnostics: dict | None = None,
) -> list[CandidateConcept]:
    """Infer concepts through embedding neighbours of noun-phrase n-grams.

    Each chunk is cut into n-grams (n <= 3); each n-gram with a vector
    queries its ``k`` nearest words (its own tokens excluded), and every
    neighbour whose text matches an ontology label at ``threshold`` adds one
    hit to that concept.
    """
    acc = _Accumulator()
    hit_cache: dict[str, list] = {}
    nn_cache: dict[str, list] = {}
    n_grams = n_oov = 0
    chunks = chunk_noun_phrases(ts)
    for chunk in chunks:
        words = chunk.text.split()
        for n in range(1, min(3, len(words)) + 1):
            for i in range(len(words) - n + 1):
                gram = " ".join(words[i:i + n])
                n_grams += 1
                if gram not in nn_cache:
                    vec = vs.phrase_vector(gram)
                    if vec is None or not vec.any():
                        nn_cache[gram] = None
                    else:
                        nn_cache[gram] = top_k(vs, vec, k, exclude={gram, "_".join(gram.split()), *gram.split()})
                neighbours = nn_cache[gram]
                if neighbours is None:
                    n_oov += 1
                    continue
                for word, sim in neighbours:
                    text = word.replace("_", " ")
                    if text not in hit_cache:
                        hit_cache[text] = _hits(o, text, threshold)
                    for cid, _ in hit_cache[text]:
                        acc.add(cid, gram, prov=(gram, word, round(sim, 12)))
    if diagnostics is not None:
        diagnostics.update(n_chunks=len(chunks), n_semantic_grams=n_grams, n_oov_grams=n_oov)
    return acc.result(direct=False)


def merge_candidates(*lists: Iterable[CandidateConcept]) -> list[CandidateConcept]:
    """Pool candidate lists: sum frequencies, union sources, OR flags."""
    pooled: dict[str, CandidateConcept] = {}
    for cands in lists:
        for c in cands:
            prev = pooled.get(c.concept_id)
            if prev is None:
                pooled[c.concept_id] = c
            else:
                pooled[c.concept_id] = CandidateConcept(
                    c.concept_id,
                    prev.frequency + c.frequency,
                    prev.sources | c.sources,
                    direct=prev.direct or c.direct,
                    exact=prev.exact or c.exact,
                    provenance=prev.provenance | c.provenance,
                )
    return [pooled[k] for k in sorted(pooled)]


def rank_candidates(cands: Sequence[CandidateConcept]) -> list[tuple[str, float]]:
    """Relevance = frequency x diversity; direct hits get (max indirect) + 1."""
    indirect = [float(c.frequency * c.diversity) for c in cands if not c.direct]
    top = max(indirect, default=0.0) + 1.0
    scored = [(c.concept_id, top if c.direct else float(c.frequency * c.diversity)) for c in cands]
    return sorted(scored, key=lambda t: (-t[1], t[0]))


def elbow_index(values: Sequence[float]) -> int | None:
    """Index of the point farthest from the first-to-last chord.

    ``None`` when there are fewer than three points or every distance is 0.
    First index wins ties.
    """
    n = len(values)
    if n < 3:
        return None
    x0, y0 = 0.0, float(values[0])
    x1, y1 = float(n - 1), float(values[-1])
    dx, dy = x1 - x0, y1 - y0
    norm = (dx * dx + dy * dy) ** 0.5
    best, best_d = None, 0.0
    for i, y in enumerate(values):
        d = abs(dy * (i - x0) - dx * (float(y) - y0)) / norm
        if d > best_d:
            best, best_d = i, d
    return best


def select_concepts(ranked: Sequence[tuple[str, float]]) -> list[tuple[str, float]]:
    """Keep the ranked prefix through the elbow point (inclusive)."""
    idx = elbow_index([r for _, r in ranked])
    if idx is None:
        return list(ranked)
    return list(ranked[: idx + 1])


def build_graph(
    selected: Sequence[tuple[str, float]],
    o: Ontology,
    origins: dict[str, str] | None = None,
    provenance: dict[str, tuple] | None = None,
) -> ConceptGraph:
    """Selected concepts plus their direct super-topics, with induced edges."""
    origins = origins or {}
    nodes: dict[str, GraphNode] = {}
    for cid, rel in selected:
        nodes[cid] = GraphNode(float(rel), origins.get(cid, "direct"))
    expanded: dict[str, float] = {}
    for cid, rel in selected:
        for member in o.equivalents(cid):
            for parent in o.parents(member):
                prep = o.representative(parent)
                if prep in nodes or prep == cid:
                    continue
                expanded[prep] = max(expanded.get(prep, 0.0), float(rel))
    for pid in sorted(expanded):
        nodes[pid] = GraphNode(expanded[pid], "expanded")
    edges = set()
    for e in o.edges:
        a, b = o.representative(e.src), o.representative(e.dst)
        if a != b and a in nodes and b in nodes:
            edges.add(_edge(a, b, e.rel.value))
    prov = {k: v for k, v in (provenance or {}).items() if k in nodes}
    return ConceptGraph(nodes, frozenset(edges), prov)


def union_graphs(*graphs: ConceptGraph) -> ConceptGraph:
    """Node-wise union keeping the highest relevance (origin of that node)."""
    nodes: dict[str, GraphNode] = {}
    edges = set()
    prov: dict[str, tuple] = {}
    for g in graphs:
        for cid, node in g.nodes.items():
            prev = nodes.get(cid)
            if prev is None or _node_key(node) > _node_key(prev):
                nodes[cid] = node
        edges |= g.edges
        for cid, p in g.provenance.items():
            prov[cid] = tuple(sorted(set(prov.get(cid, ())) | set(p)))
    return ConceptGraph(nodes, frozenset(edges), prov)


def _node_key(node: GraphNode):
    # prefer higher relevance, then the stronger origin
    return (node.relevance, -ORIGINS.index(node.origin))


def extract(
    text: str,
    o: Ontology,
    vs: VectorStore | None = None,
    *,
    threshold: float = DEFAULT_THRESHOLD,
    k: int = DEFAULT_TOP_K,
    diagnostics: dict | None = None,
) -> ConceptGraph:
    """Full pipeline for one text: extract, pool, rank, select, expand.

    Without a vector store only the syntactic pass runs.
    """
    ts = tokenize(text)
    syn = syntactic_extract(ts, o, threshold)
    sem = semantic_extract(ts, o, vs, k, threshold, diagnostics) if vs is not None else []
    cands = merge_candidates(syn, sem)
    selected = select_concepts(rank_candidates(cands))
    by_id = {c.concept_id: c for c in cands}
    origins = {cid: by_id[cid].origin for cid, _ in selected}
    provenance = {
        cid: tuple(sorted(by_id[cid].provenance)) for cid, _ in selected if by_id[cid].provenance
    }
    return build_graph(selected, o, origins, provenance)


def extract_sections(doc, o: Ontology, vs: VectorStore | None = None, sections=("skills", "experience"), **kw) -> ConceptGraph:
    """Extract each named section independently and union the graphs."""
    graphs = [extract(doc.sections.get(name, ""), o, vs, **kw) for name in sections]
    return union_graphs(*graphs)


class SkillGraphExtractor(TransformerMixin, BaseEstimator):
    """Turn texts into ConceptGraphs against a fixed ontology.

    Parameters
    ----------
    ontology : Ontology
    vectors : VectorStore or None
        Enables the semantic pass when given.
    threshold : float
        Minimum Levenshtein similarity for a label match.
    top_k : int
        Embedding neighbours queried per noun-phrase n-gram.
    """

    def __init__(self, ontology=None, vectors=None, threshold=DEFAULT_THRESHOLD, top_k=DEFAULT_TOP_K):
        self.ontology = ontology
        self.vectors = vectors
        self.threshold = threshold
        self.top_k = top_k

    def fit(self, X=None, y=None):
        from .validation import check_unit_interval

        if not isinstance(self.ontology, Ontology):
            raise TypeError("ontology must be an Ontology")
        check_unit_interval(self.threshold, "threshold")
        if int(self.top_k) < 1:
            raise ValueError("top_k must be >= 1")
        self.n_concepts_ = len(self.ontology)
        return self

    def transform(self, X) -> list[ConceptGraph]:
        from sklearn.utils.validation import check_is_fitted

        from .validation import check_texts

        check_is_fitted(self, "n_concepts_")
        return [
            extract(t, self.ontology, self.vectors, threshold=self.threshold, k=self.top_k)
            for t in check_texts(X)
        ]
