import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from skillmatch.culture import (
    DIMENSIONS,
    N_POLES,
    CultureGraph,
    CultureProfile,
    CultureProfileError,
    CultureProfiler,
    culture_match,
    load_culture_graph,
    pole_table,
    profile,
)
from skillmatch.embeddings import VectorStore
from skillmatch.exceptions import ValidationError


def orthogonal_fixture():
    """Culture graph with pole-private words, each pole owning one basis axis."""
    tree, vectors = {}, {}
    for d, dim in enumerate(DIMENSIONS):
        tree[dim] = {}
        for side in (0, 1):
            pole = 2 * d + side
            words = [f"p{pole}w{j}" for j in range(4)]
            tree[dim][f"pole{pole}"] = {f"desc{pole}a": words[:2], f"desc{pole}b": [" ".join(words[2:])]}
            for w in words:
                vectors[w] = np.eye(N_POLES)[pole]
    return CultureGraph.from_dict(tree), VectorStore.from_dict(vectors), tree


def test_shipped_graph_shape():
    cg = load_culture_graph()
    assert cg.dimensions == list(DIMENSIONS)
    assert len(cg.poles) == 12
    assert all(p.descriptors for p in cg.poles)


def test_round_trip_dict():
    cg = load_culture_graph()
    assert CultureGraph.from_dict(cg.to_dict()) == cg


def test_five_dimensions_rejected():
    tree = load_culture_graph().to_dict()
    del tree[DIMENSIONS[-1]]
    with pytest.raises(ValidationError, match="6 dimensions"):
        CultureGraph.from_dict(tree)


def test_empty_descriptor_rejected(tmp_path):
    tree = load_culture_graph().to_dict()
    pole = next(iter(tree[DIMENSIONS[0]]))
    desc = next(iter(tree[DIMENSIONS[0]][pole]))
    tree[DIMENSIONS[0]][pole][desc] = []
    p = tmp_path / "cg.json"
    p.write_text(json.dumps(tree))
    with pytest.raises(ValidationError, match="no terms"):
        load_culture_graph(p)


@pytest.mark.parametrize("target", range(N_POLES))
def test_pole_text_hits_target(target):
    cg, vs, _ = orthogonal_fixture()
    text = " ".join(cg.poles[target].terms())
    p = profile(text, cg, vs)
    antonym = target ^ 1
    assert p.pole_values[target] >= 0.99
    assert p.pole_values[antonym] <= 0.01
    assert p.coverage == 1.0


def test_empty_text_errors():
    cg, vs, _ = orthogonal_fixture()
    with pytest.raises(CultureProfileError):
        profile("the and of", cg, vs)


def test_oov_text_errors():
    cg, vs, _ = orthogonal_fixture()
    with pytest.raises(CultureProfileError):
        profile("zebra quantum", cg, vs)


def test_duplicated_text_same_profile():
    cg, vs, _ = orthogonal_fixture()
    text = "p0w0 p3w1 p3w2"
    np.testing.assert_array_equal(profile(text, cg, vs).pole_values, profile(text + " " + text, cg, vs).pole_values)


class TestMatch:
    def test_identical(self):
        p = np.linspace(0, 1, N_POLES)
        assert culture_match(p, p) == 1.0

    def test_opposite_corners(self):
        assert culture_match(np.zeros(N_POLES), np.ones(N_POLES)) == 0.0

    def test_one_axis(self):
        e = np.zeros(N_POLES)
        e[0] = 1.0
        assert culture_match(e, np.zeros(N_POLES)) == pytest.approx(1 - 1 / math.sqrt(12))
        assert culture_match(e, np.zeros(N_POLES)) == pytest.approx(0.7113, abs=1e-4)

    def test_wrong_length(self):
        with pytest.raises(ValidationError):
            culture_match(np.zeros(5), np.zeros(5))

    @given(
        st.lists(st.floats(0, 1), min_size=N_POLES, max_size=N_POLES),
        st.lists(st.floats(0, 1), min_size=N_POLES, max_size=N_POLES),
    )
    def test_symmetric_bounded(self, a, b):
        m = culture_match(a, b)
        assert m == culture_match(b, a)
        assert 0.0 <= m <= 1.0


def test_profile_clipped():
    p = CultureProfile(np.full(N_POLES, 1.5), 1.0)
    assert p.pole_values.max() == 1.0


def test_pole_table():
    cg, vs, _ = orthogonal_fixture()
    a = profile("p0w0", cg, vs)
    b = profile("p1w0", cg, vs)
    rows = pole_table(a, b)
    assert rows[0] == {"pole": "pole0", "cv": 1.0, "job": 0.0, "delta": 1.0}
    assert len(rows) == N_POLES


def test_profiler_transformer():
    cg, vs, _ = orthogonal_fixture()
    est = CultureProfiler(culture_graph=cg, vectors=vs).fit()
    X = est.transform(["p0w0 p0w1", "p5w3"])
    assert X.shape == (2, N_POLES)
    assert X[0, 0] == pytest.approx(1.0) and X[1, 5] == pytest.approx(1.0)
    assert list(est.get_feature_names_out())[:2] == ["pole0", "pole1"]
