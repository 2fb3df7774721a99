"""Approximate graph edit distance between labelled graphs.

``ged_hausdorff`` gives a lower bound by matching every node (and its
incident edges) to its cheapest counterpart in the other graph, without
the one-to-one constraint.  ``ged_greedy`` gives an upper bound: it builds
an actual node mapping greedily and prices the edit path that mapping
induces.  ``similarity`` normalises the upper bound by the cost of the
trivial delete-everything / insert-everything path.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Mapping

from .skillgraph import ConceptGraph


@dataclass(frozen=True)
class EditCostModel:
    node_ins: float = 1.0
    node_del: float = 1.0
    node_sub: float = 1.0
    edge_ins: float = 1.0
    edge_del: float = 1.0
    edge_sub: float = 1.0

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0")

    def node_cost(self, a, b) -> float:
        return 0.0 if a == b else self.node_sub

    def edge_cost(self, a, b) -> float:
        return 0.0 if a == b else self.edge_sub


UNIT_COSTS = EditCostModel()


@dataclass(frozen=True)
class LabeledGraph:
    """Nodes keyed by id with a label; edges keyed by sorted id pair."""

    nodes: Mapping[str, str] = field(default_factory=dict)
    edges: Mapping[tuple[str, str], str] = field(default_factory=dict)

    @classmethod
    def build(cls, nodes, edges=()) -> "LabeledGraph":
        """``nodes``: mapping id -> label or iterable of ids (label = id).
        ``edges``: iterable of ``(u, v)`` or ``(u, v, label)``."""
        if not isinstance(nodes, Mapping):
            nodes = {n: n for n in nodes}
        emap = {}
        for e in edges:
            u, v = e[0], e[1]
            lab = e[2] if len(e) > 2 else ""
            if u == v:
                raise ValueError("self-loops are not supported")
            if u not in nodes or v not in nodes:
                raise ValueError(f"edge ({u}, {v}) references a missing node")
            emap[(u, v) if u <= v else (v, u)] = lab
        return cls(dict(nodes), emap)

    def incident(self) -> dict[str, list[str]]:
        inc = {n: [] for n in self.nodes}
        for (u, v), lab in self.edges.items():
            inc[u].append(lab)
            inc[v].append(lab)
        return inc


def as_labeled(g) -> LabeledGraph:
    if isinstance(g, LabeledGraph):
        return g
    if isinstance(g, ConceptGraph):
        return LabeledGraph.build(g.node_ids(), sorted(g.edges))
    raise TypeError(f"cannot compare objects of type {type(g).__name__}")


@dataclass(frozen=True)
class GedResult:
    lower: float
    upper: float
    similarity: float
    assignment: dict = field(default_factory=dict)


def _edge_hausdorff(P, Q, cm: EditCostModel) -> float:
    total = 0.0
    for p in P:
        total += min([cm.edge_del] + [cm.edge_cost(p, q) / 2 for q in Q])
    for q in Q:
        total += min([cm.edge_ins] + [cm.edge_cost(p, q) / 2 for p in P])
    return total


class _Local:
    """Per-node and per-pair local costs shared by both bounds."""

    def __init__(self, g1: LabeledGraph, g2: LabeledGraph, cm: EditCostModel):
        inc1, inc2 = g1.incident(), g2.incident()
        self.f_del = {u: cm.node_del + len(inc1[u]) * cm.edge_del / 2 for u in g1.nodes}
        self.f_ins = {v: cm.node_ins + len(inc2[v]) * cm.edge_ins / 2 for v in g2.nodes}
        # 2 * Hausdorff substitution term: node cost plus half the local edge cost
        self.pair = {
            (u, v): cm.node_cost(g1.nodes[u], g2.nodes[v]) + _edge_hausdorff(inc1[u], inc2[v], cm) / 2
            for u in g1.nodes
            for v in g2.nodes
        }


def ged_hausdorff(g1, g2, cm: EditCostModel = UNIT_COSTS) -> float:
    """Hausdorff edit distance; never exceeds the exact GED."""
    g1, g2 = as_labeled(g1), as_labeled(g2)
    loc = _Local(g1, g2, cm)
    total = 0.0
    for u in g1.nodes:
        total += min([loc.f_del[u]] + [loc.pair[u, v] / 2 for v in g2.nodes])
    for v in g2.nodes:
        total += min([loc.f_ins[v]] + [loc.pair[u, v] / 2 for u in g1.nodes])
    return total


def path_cost(g1, g2, mapping: Mapping[str, str], cm: EditCostModel = UNIT_COSTS) -> float:
    """Exact cost of the edit path induced by a partial injective node map."""
    g1, g2 = as_labeled(g1), as_labeled(g2)
    image = set(mapping.values())
    if len(image) != len(mapping):
        raise ValueError("mapping is not injective")
    cost = 0.0
    for u, lab in g1.nodes.items():
        cost += cm.node_cost(lab, g2.nodes[mapping[u]]) if u in mapping else cm.node_del
    cost += cm.node_ins * sum(1 for v in g2.nodes if v not in image)
    covered = set()
    for (a, b), lab in g1.edges.items():
        if a in mapping and b in mapping:
            x, y = mapping[a], mapping[b]
            key = (x, y) if x <= y else (y, x)
            if key in g2.edges:
                cost += cm.edge_cost(lab, g2.edges[key])
                covered.add(key)
                continue
        cost += cm.edge_del
    cost += cm.edge_ins * sum(1 for k in g2.edges if k not in covered)
    return cost


def _greedy_mapping(g1: LabeledGraph, g2: LabeledGraph, cm: EditCostModel) -> dict[str, str]:
    loc = _Local(g1, g2, cm)
    used1, used2 = set(), set()
    mapping = {}
    for (u, v), c in sorted(loc.pair.items(), key=lambda kv: (kv[1], kv[0])):
        if u in used1 or v in used2:
            continue
        if c > loc.f_del[u] + loc.f_ins[v]:
            continue
        mapping[u] = v
        used1.add(u)
        used2.add(v)
    return mapping


def trivial_cost(g1, g2, cm: EditCostModel = UNIT_COSTS) -> float:
    """Cost of deleting all of ``g1`` and inserting all of ``g2``."""
    g1, g2 = as_labeled(g1), as_labeled(g2)
    return (
        len(g1.nodes) * cm.node_del
        + len(g1.edges) * cm.edge_del
        + len(g2.nodes) * cm.node_ins
        + len(g2.edges) * cm.edge_ins
    )


def ged_greedy(g1, g2, cm: EditCostModel = UNIT_COSTS) -> tuple[float, dict[str, str]]:
    """Upper bound from a greedy node assignment.

    Pairs are taken in ascending local cost (ties by id pair), each node at
    most once; leftovers are deleted or inserted.  The greedy pass runs in
    both directions and the cheaper path wins, which makes the bound
    symmetric for symmetric cost models.  The trivial path is the fallback.
    """
    g1, g2 = as_labeled(g1), as_labeled(g2)
    fwd = _greedy_mapping(g1, g2, cm)
    c_fwd = path_cost(g1, g2, fwd, cm)
    rev = _greedy_mapping(g2, g1, cm)
    inv = {v: u for u, v in rev.items()}
    c_rev = path_cost(g1, g2, inv, cm)
    best_cost, best_map = (c_fwd, fwd) if c_fwd <= c_rev else (c_rev, inv)
    triv = trivial_cost(g1, g2, cm)
    if triv < best_cost:
        return triv, {}
    return best_cost, dict(sorted(best_map.items()))


def similarity(g1, g2, cm: EditCostModel = UNIT_COSTS) -> GedResult:
    """``1 - upper / trivial_cost``; two empty graphs are identical."""
    g1, g2 = as_labeled(g1), as_labeled(g2)
    lower = ged_hausdorff(g1, g2, cm)
    upper, assignment = ged_greedy(g1, g2, cm)
    denom = trivial_cost(g1, g2, cm)
    sim = 1.0 if denom == 0 else 1.0 - upper / denom
    return GedResult(lower, upper, min(1.0, max(0.0, sim)), assignment)


def similarity_matrix(cv_graphs: Mapping[str, Mapping[str, object]], job_graphs: Mapping[str, object],
                      cm: EditCostModel = UNIT_COSTS) -> dict[str, dict[str, float]]:
    """Rows = CV ids, columns = section names present in ``job_graphs``."""
    sections = sorted(job_graphs)
    return {
        cv: {s: similarity(graphs[s], job_graphs[s], cm).similarity for s in sections}
        for cv, graphs in sorted(cv_graphs.items())
    }


def write_similarity_csv(matrix: Mapping[str, Mapping[str, float]], path_or_file) -> None:
    sections = sorted({s for row in matrix.values() for s in row})
    own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
    fh = open(path_or_file, "w", encoding="utf-8", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["id", *sections])
        for cv in sorted(matrix):
            w.writerow([cv, *(f"{matrix[cv].get(s, float('nan')):.6f}" for s in sections)])
    finally:
        if own:
            fh.close()
