"""Skill ontologies: labelled concepts joined by typed relations.

File format (UTF-8 CSV, three columns, ``#`` comments allowed)::

    machine learning,concept,ml|statistical learning
    artificial intelligence,concept,
    machine learning,super_topic,artificial intelligence
    ontology matching,equivalent,ontology mapping

A ``concept`` row declares a concept by primary label with optional
``|``-separated alternative labels.  Other rows are ``src,relation,dst``
triples over declared primary labels; ``super_topic`` points child -> parent.
"""

from __future__ import annotations

import csv
import re
from collections import defaultdict, deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable

from .exceptions import NotFoundError, ValidationError
from .textkit import lev_similarity, max_edits


class RelationKind(str, Enum):
    EQUIVALENT = "equivalent"
    SUPER_TOPIC = "super_topic"
    CONTRIBUTES_TO = "contributes_to"


_ALIASES = {
    "relatedequivalent": RelationKind.EQUIVALENT,
    "broadergeneric": RelationKind.SUPER_TOPIC,
    "contributesto": RelationKind.CONTRIBUTES_TO,
}


def normalize_label(label: str) -> str:
    return re.sub(r"\s+", " ", label.strip().lower())


def concept_id(label: str) -> str:
    return normalize_label(label).replace(" ", "_")


@dataclass(frozen=True)
class Concept:
    id: str
    primary_label: str
    alt_labels: tuple[str, ...] = ()

    @property
    def labels(self) -> tuple[str, ...]:
        return (self.primary_label,) + self.alt_labels


@dataclass(frozen=True)
class Edge:
    src: str
    rel: RelationKind
    dst: str


@dataclass(eq=False)
class Ontology:
    """Validated, read-only concept graph.

    Equivalence classes are closed under ``equivalent`` edges; each class is
    represented by its smallest concept id.  Label lookup treats every label
    of a class as a label of each member.
    """

    concepts: dict[str, Concept]
    edges: frozenset[Edge]
    name: str = "ontology"
    _rep: dict[str, str] = field(init=False, repr=False)
    _members: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    _parents: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    _label_index: dict[str, tuple[str, ...]] = field(init=False, repr=False)
    _by_length: dict[int, list[str]] = field(init=False, repr=False)

    def __post_init__(self):
        for e in self.edges:
            for end in (e.src, e.dst):
                if end not in self.concepts:
                    raise ValidationError(f"dangling edge endpoint {end!r} in {e.src} {e.rel.value} {e.dst}")
            if e.rel is RelationKind.SUPER_TOPIC and e.src == e.dst:
                raise ValidationError(f"self-loop super_topic edge on {e.src!r}")
        parents = defaultdict(list)
        for e in sorted(self.edges, key=lambda e: (e.src, e.rel.value, e.dst)):
            if e.rel is RelationKind.SUPER_TOPIC:
                parents[e.src].append(e.dst)
        self._parents = {k: tuple(v) for k, v in parents.items()}
        cycle = self._find_cycle()
        if cycle:
            raise ValidationError("super_topic cycle: " + " -> ".join(cycle))
        self._build_classes()
        self._build_label_index()

    # construction helpers -------------------------------------------------

    def _find_cycle(self) -> list[str] | None:
        color = {}
        for start in sorted(self.concepts):
            if start in color:
                continue
            stack = [(start, iter(self._parents.get(start, ())))]
            path = [start]
            color[start] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    color[node] = 2
                    stack.pop()
                    path.pop()
                elif color.get(nxt) == 1:
                    return path[path.index(nxt):] + [nxt]
                elif nxt not in color:
                    color[nxt] = 1
                    path.append(nxt)
                    stack.append((nxt, iter(self._parents.get(nxt, ()))))
        return None

    def _build_classes(self):
        parent = {c: c for c in self.concepts}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e in self.edges:
            if e.rel is RelationKind.EQUIVALENT:
                a, b = find(e.src), find(e.dst)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        members = defaultdict(list)
        for c in sorted(self.concepts):
            members[find(c)].append(c)
        self._rep = {}
        self._members = {}
        for rep, ms in members.items():
            rep = min(ms)
            for m in ms:
                self._rep[m] = rep
            self._members[rep] = tuple(ms)

    def _build_label_index(self):
        index = defaultdict(set)
        for c in self.concepts.values():
            for lab in c.labels:
                index[lab].add(c.id)
        # every label of a class labels all of its members
        closed = {}
        for lab, ids in index.items():
            out = set()
            for i in ids:
                out.update(self._members[self._rep[i]])
            closed[lab] = tuple(sorted(out))
        self._label_index = closed
        by_len = defaultdict(list)
        for lab in sorted(closed):
            by_len[len(lab)].append(lab)
        self._by_length = dict(by_len)

    # queries ----------------------------------------------------------------

    def __contains__(self, cid) -> bool:
        return cid in self.concepts

    def __len__(self) -> int:
        return len(self.concepts)

    def concept(self, cid: str) -> Concept:
        try:
            return self.concepts[cid]
        except KeyError:
            raise NotFoundError(f"unknown concept id {cid!r}") from None

    def representative(self, cid: str) -> str:
        self.concept(cid)
        return self._rep[cid]

    def equivalents(self, cid: str) -> tuple[str, ...]:
        """All concept ids in the equivalence class of ``cid`` (itself included)."""
        return self._members[self.representative(cid)]

    def label(self, cid: str) -> str:
        return self.concept(cid).primary_label

    def parents(self, cid: str) -> tuple[str, ...]:
        return self._parents.get(cid, ())

    def labels(self) -> list[str]:
        return sorted(self._label_index)

    def id_for_label(self, label: str) -> str:
        ids = self._label_index.get(normalize_label(label))
        if not ids:
            raise NotFoundError(f"no concept labelled {label!r}")
        return ids[0]

    def edges_of(self, rel: RelationKind | None = None) -> list[Edge]:
        es = [e for e in self.edges if rel is None or e.rel is rel]
        return sorted(es, key=lambda e: (e.src, e.rel.value, e.dst))


def find_by_label(o: Ontology, label: str, min_sim: float = 0.94) -> list[tuple[Concept, float]]:
    """Concepts with any label at Levenshtein similarity >= ``min_sim``.

    Sorted by descending similarity, then concept id.
    """
    if not 0.0 <= min_sim <= 1.0:
        raise ValueError("min_sim must be in [0, 1]")
    query = normalize_label(label)
    best: dict[str, float] = {}
    exact = o._label_index.get(query)
    if exact:
        for cid in exact:
            best[cid] = 1.0
    n = len(query)
    if min_sim < 1.0:
        for length, labs in o._by_length.items():
            longest = max(length, n)
            budget = max_edits(longest, min_sim)
            if budget < 1 or abs(length - n) > budget:
                continue
            for lab in labs:
                if lab == query:
                    continue
                sim = lev_similarity(query, lab)
                if sim >= min_sim:
                    for cid in o._label_index[lab]:
                        if sim > best.get(cid, -1.0):
                            best[cid] = sim
    ranked = sorted(best.items(), key=lambda kv: (-kv[1], kv[0]))
    return [(o.concepts[cid], sim) for cid, sim in ranked]


def super_topics(o: Ontology, cid: str, depth: int = 1) -> set[Concept]:
    """Ancestors of ``cid`` within ``depth`` super_topic hops."""
    o.concept(cid)
    if depth < 1:
        raise ValueError("depth must be >= 1")
    seen = {cid: 0}
    queue = deque([cid])
    while queue:
        node = queue.popleft()
        if seen[node] >= depth:
            continue
        for p in o.parents(node):
            if p not in seen:
                seen[p] = seen[node] + 1
                queue.append(p)
    del seen[cid]
    return {o.concepts[c] for c in seen}


def build_ontology(
    declarations: Iterable[tuple[str, Iterable[str]]],
    triples: Iterable[tuple[str, str, str]],
    name: str = "ontology",
) -> Ontology:
    """Assemble an Ontology from (primary, alt labels) and label triples."""
    concepts: dict[str, Concept] = {}
    label_owner: dict[str, str] = {}
    for primary, alts in declarations:
        primary = normalize_label(primary)
        if not primary:
            raise ValidationError("empty primary label")
        cid = concept_id(primary)
        if cid in concepts:
            raise ValidationError(f"concept {primary!r} declared twice")
        alt = tuple(dict.fromkeys(a for a in (normalize_label(x) for x in alts) if a and a != primary))
        concepts[cid] = Concept(cid, primary, alt)
        label_owner[primary] = cid
    edges = set()
    for src, rel, dst in triples:
        kind = parse_relation(rel)
        s, d = normalize_label(src), normalize_label(dst)
        for lab in (s, d):
            if lab not in label_owner:
                raise ValidationError(f"dangling edge endpoint {lab!r} in {src},{rel},{dst}")
        edges.add(Edge(label_owner[s], kind, label_owner[d]))
    return Ontology(concepts, frozenset(edges), name=name)


def parse_relation(name: str) -> RelationKind:
    key = name.strip().lower()
    try:
        return RelationKind(key)
    except ValueError:
        pass
    key = re.sub(r"^(skos|cso|rdfs?):", "", key).replace("_", "")
    if key in _ALIASES:
        return _ALIASES[key]
    raise ValidationError(f"unknown relation {name!r}")


def load_ontology(path, name: str | None = None) -> Ontology:
    declarations = []
    triples = []
    with open(path, encoding="utf-8", newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), 1):
            if not row or not "".join(row).strip() or row[0].lstrip().startswith("#"):
                continue
            if len(row) != 3:
                raise ValidationError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            src, rel, dst = (c.strip() for c in row)
            if rel.lower() == "concept":
                declarations.append((src, [a for a in dst.split("|") if a.strip()]))
            else:
                try:
                    parse_relation(rel)
                except ValidationError as exc:
                    raise ValidationError(f"{path}:{lineno}: {exc}") from None
                triples.append((src, rel, dst))
    return build_ontology(declarations, triples, name=name or str(path))


def write_ontology(o: Ontology, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for cid in sorted(o.concepts):
            c = o.concepts[cid]
            w.writerow([c.primary_label, "concept", "|".join(c.alt_labels)])
        for e in o.edges_of():
            w.writerow([o.label(e.src), e.rel.value, o.label(e.dst)])


def export_edge_list(o: Ontology, path) -> None:
    """Tab-separated ``source target relation`` list for graph viewers."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("source\ttarget\trelation\n")
        for e in o.edges_of():
            fh.write(f"{o.label(e.src)}\t{o.label(e.dst)}\t{e.rel.value}\n")
