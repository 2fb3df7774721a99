import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import planted
from skillmatch.docstore import Document
from skillmatch.exceptions import ValidationError
from skillmatch.ontology import RelationKind, load_ontology, write_ontology
from skillmatch.taxonomy import (
    DEFAULT_TOP_N,
    Cluster,
    ClusterSet,
    TaxonomyBuilder,
    cluster_candidates,
    emit_draft_ontology,
    harvest_candidates,
    kmeans,
)


class TestHarvest:
    def test_most_frequent_first(self):
        docs = ["machine learning"] * 50 + ["python"] * 49 + ["sql"] * 3
        table = harvest_candidates(docs)
        # its two words also count 50; the longer gram wins the tie
        assert table.entries[0] == ("machine learning", 50)
        assert max(c for g, c in table.entries if "machine" not in g and "learning" not in g) < 50

    def test_top_n_larger_than_vocab(self):
        table = harvest_candidates(["kafka spark"], top_n=100)
        assert sorted(table.grams()) == ["kafka", "kafka spark", "spark"]

    def test_default_top_n(self):
        assert DEFAULT_TOP_N == 200
        docs = [" ".join(f"w{i}x{j}" for j in range(3)) + "." for i in range(100)]
        assert len(harvest_candidates(docs)) == 200

    def test_documents_accepted(self):
        doc = Document.from_dict(
            {"id": "J", "kind": "job_post", "sections": {"summary": "python", "experience": "python", "skills": "sql"}}
        )
        assert dict(harvest_candidates([doc]).entries) == {"python": 2, "sql": 1}

    def test_empty_corpus(self):
        with pytest.raises(ValidationError):
            harvest_candidates([])

    def test_matches_recount(self):
        docs, _ = planted.corpus()
        table = harvest_candidates(docs, top_n=10_000)
        assert dict(table.entries) == dict(planted.recount(docs))


class TestKmeans:
    def test_k1(self):
        X = np.random.default_rng(0).normal(size=(20, 3))
        labels, centroids, _, _ = kmeans(X, 1)
        assert set(labels) == {0}
        np.testing.assert_allclose(centroids[0], X.mean(axis=0))

    def test_two_groups(self):
        rng = np.random.default_rng(1)
        X = np.vstack([rng.normal(0, 0.1, (10, 2)), rng.normal(10, 0.1, (10, 2))])
        labels, _, _, _ = kmeans(X, 2, seed=4)
        assert len(set(labels[:10])) == 1 and len(set(labels[10:])) == 1
        assert labels[0] != labels[10]

    def test_deterministic(self):
        X = np.random.default_rng(2).normal(size=(30, 4))
        a, b = kmeans(X, 3, seed=9), kmeans(X, 3, seed=9)
        np.testing.assert_array_equal(a[0], b[0])
        np.testing.assert_array_equal(a[1], b[1])
        assert a[2] == b[2]

    def test_duplicate_points_no_empty_cluster(self):
        X = np.array([[0.0, 0.0]] * 5 + [[1.0, 1.0]])
        labels, _, _, _ = kmeans(X, 3, seed=0)
        assert set(labels) == {0, 1, 2}

    def test_bad_k(self):
        with pytest.raises(ValidationError):
            kmeans(np.zeros((2, 2)), 3)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 1000), st.integers(1, 5))
    def test_inertia_non_increasing(self, seed, k):
        X = np.random.default_rng(seed).normal(size=(25, 3))
        _, _, hist, n_iter = kmeans(X, k, seed=seed)
        assert len(hist) == n_iter
        assert all(b <= a + 1e-9 for a, b in zip(hist, hist[1:]))


class TestClusterAndEmit:
    def test_planted_split(self):
        docs, _ = planted.corpus()
        cs = cluster_candidates(harvest_candidates(docs), planted.vectors(), k=2, seed=0)
        groups = [{planted.group_of(g) for g in c.members} for c in cs.clusters]
        assert sorted(map(sorted, groups)) == [["business"], ["tech"]]

    def test_oov_excluded(self):
        table = harvest_candidates(["python zebra"])
        cs = cluster_candidates(table, planted.vectors(), k=1)
        assert "zebra" in cs.excluded and "python zebra" in cs.excluded

    def test_structure_two_by_three(self):
        cs = ClusterSet(
            2,
            (Cluster(np.zeros(2), ("a", "b", "c")), Cluster(np.ones(2), ("d", "e", "f"))),
        )
        o = emit_draft_ontology(cs)
        edges = o.edges_of(RelationKind.SUPER_TOPIC)
        parents = {e.dst for e in edges}
        assert len(parents) == 2
        assert len({e.src for e in edges}) == 6
        assert len(edges) == 6
        assert len(o) == 8

    def test_singleton(self):
        cs = ClusterSet(1, (Cluster(np.zeros(2), ("solo",)),))
        o = emit_draft_ontology(cs)
        assert list(o.concepts) == ["solo"]
        assert not o.edges

    def test_round_trip(self, tmp_path):
        docs, _ = planted.corpus()
        o = TaxonomyBuilder(vectors=planted.vectors(), n_clusters=2).fit_transform(docs)
        p = tmp_path / "draft.csv"
        write_ontology(o, p)
        again = load_ontology(p)
        assert again.concepts == o.concepts and again.edges == o.edges

    def test_builder_attributes(self):
        docs, _ = planted.corpus(10)
        b = TaxonomyBuilder(vectors=planted.vectors(), top_n=15, n_clusters=2).fit(docs)
        assert len(b.table_) == 15
        assert b.clusters_.k == 2
        assert b.get_params()["n_clusters"] == 2
