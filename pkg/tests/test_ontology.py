import pytest
from hypothesis import given
from hypothesis import strategies as st

from skillmatch.exceptions import NotFoundError, ValidationError
from skillmatch.ontology import (
    RelationKind,
    build_ontology,
    export_edge_list,
    find_by_label,
    load_ontology,
    parse_relation,
    super_topics,
    write_ontology,
)


@pytest.fixture
def small():
    return build_ontology(
        [
            ("artificial intelligence", []),
            ("machine learning", ["ml"]),
            ("deep learning", []),
            ("ontology matching", ["ontology alignment"]),
            ("ontology mapping", []),
        ],
        [
            ("machine learning", "super_topic", "artificial intelligence"),
            ("deep learning", "super_topic", "machine learning"),
            ("ontology matching", "equivalent", "ontology mapping"),
        ],
    )


def _write(tmp_path, text):
    p = tmp_path / "o.csv"
    p.write_text(text, encoding="utf-8")
    return p


class TestLoad:
    def test_valid(self, tmp_path):
        o = load_ontology(_write(tmp_path, "a,concept,\nb,concept,\nc,concept,\na,super_topic,b\n"))
        assert len(o) == 3
        assert len(o.edges_of(RelationKind.SUPER_TOPIC)) == 1

    def test_unknown_relation(self, tmp_path):
        with pytest.raises(ValidationError, match="unknown relation"):
            load_ontology(_write(tmp_path, "a,concept,\nb,concept,\na,hates,b\n"))

    def test_two_cycle_lists_both(self, tmp_path):
        text = "a,concept,\nb,concept,\na,super_topic,b\nb,super_topic,a\n"
        with pytest.raises(ValidationError, match="cycle") as exc:
            load_ontology(_write(tmp_path, text))
        assert "a" in str(exc.value) and "b" in str(exc.value)

    def test_dangling(self, tmp_path):
        with pytest.raises(ValidationError, match="dangling"):
            load_ontology(_write(tmp_path, "a,concept,\na,super_topic,zz\n"))

    def test_self_loop(self):
        with pytest.raises(ValidationError):
            build_ontology([("a", [])], [("a", "super_topic", "a")])

    def test_cso_aliases(self):
        assert parse_relation("relatedEquivalent") is RelationKind.EQUIVALENT
        assert parse_relation("cso:broaderGeneric") is RelationKind.SUPER_TOPIC
        assert parse_relation("contributesTo") is RelationKind.CONTRIBUTES_TO

    def test_round_trip(self, small, tmp_path):
        p = tmp_path / "out.csv"
        write_ontology(small, p)
        again = load_ontology(p)
        assert again.concepts == small.concepts
        assert again.edges == small.edges

    def test_edge_list(self, small, tmp_path):
        p = tmp_path / "edges.tsv"
        export_edge_list(small, p)
        lines = p.read_text().splitlines()
        assert lines[0] == "source\ttarget\trelation"
        assert len(lines) == 1 + len(small.edges)


class TestFindByLabel:
    def test_exact(self, small):
        hits = find_by_label(small, "machine learning", 0.94)
        assert hits[0][0].id == "machine_learning"
        assert hits[0][1] == 1.0

    def test_alt_label(self, small):
        assert [c.id for c, _ in find_by_label(small, "ML")] == ["machine_learning"]

    def test_equivalence_labeling(self, small):
        ids = {c.id for c, _ in find_by_label(small, "ontology mapping")}
        assert ids == {"ontology_mapping", "ontology_matching"}
        # alt label of one member labels the whole class
        ids = {c.id for c, _ in find_by_label(small, "ontology alignment")}
        assert ids == {"ontology_mapping", "ontology_matching"}

    @pytest.mark.parametrize("length", range(5, 41))
    def test_one_substitution_threshold(self, length):
        label = "ab" * (length // 2) + "a" * (length % 2)
        o = build_ontology([(label, [])], [])
        variant = "z" + label[1:]
        hit = bool(find_by_label(o, variant, 0.94))
        assert hit == (1 - 1 / length >= 0.94)

    @given(st.text("abc ", min_size=1, max_size=20))
    def test_results_meet_threshold(self, q):
        o = build_ontology([("abc abc", []), ("abcabc", []), ("cab", [])], [])
        from skillmatch.textkit import lev_similarity

        for c, sim in find_by_label(o, q, 0.8):
            assert sim >= 0.8
            assert sim == max(lev_similarity(q.strip().lower(), lab) for lab in c.labels) or sim == 1.0


class TestSuperTopics:
    def test_parent(self, small):
        assert {c.id for c in super_topics(small, "machine_learning")} == {"artificial_intelligence"}

    def test_root(self, small):
        assert super_topics(small, "artificial_intelligence") == set()

    def test_chain_depth(self, small):
        assert {c.id for c in super_topics(small, "deep_learning", 2)} == {
            "machine_learning",
            "artificial_intelligence",
        }
        assert {c.id for c in super_topics(small, "deep_learning", 1)} == {"machine_learning"}

    def test_unknown(self, small):
        with pytest.raises(NotFoundError):
            super_topics(small, "nope")


def test_representative_is_smallest_id(small):
    assert small.representative("ontology_matching") == "ontology_mapping"
    assert small.equivalents("ontology_matching") == ("ontology_mapping", "ontology_matching")
