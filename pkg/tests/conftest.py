import shutil
from pathlib import Path

import pytest

from skillmatch.embeddings import VectorStore
from skillmatch.ontology import build_ontology

ROOT = Path(__file__).resolve().parents[1]
DEMO = ROOT / "demo"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def toy_ontology():
    """Eight concepts: a small AI branch, an equivalence pair and a tools branch."""
    return build_ontology(
        [
            ("artificial intelligence", ["ai"]),
            ("machine learning", ["ml models"]),
            ("deep learning", []),
            ("neural networks", ["neural nets"]),
            ("artificial neural networks", []),
            ("python", []),
            ("programming languages", []),
            ("data visualization", ["dataviz"]),
        ],
        [
            ("machine learning", "super_topic", "artificial intelligence"),
            ("deep learning", "super_topic", "machine learning"),
            ("neural networks", "super_topic", "machine learning"),
            ("neural networks", "equivalent", "artificial neural networks"),
            ("python", "super_topic", "programming languages"),
        ],
        name="toy",
    )


@pytest.fixture(scope="session")
def toy_vectors():
    # three loose topics: learning, code, charts
    return VectorStore.from_dict(
        {
            "tensorflow": [1.0, 0.0, 0.0],
            "keras": [0.95, 0.05, 0.0],
            "deep_learning": [0.9, 0.1, 0.0],
            "neural_networks": [0.85, 0.0, 0.15],
            "scripting": [0.0, 1.0, 0.0],
            "python": [0.05, 0.95, 0.0],
            "charts": [0.0, 0.0, 1.0],
            "dashboards": [0.0, 0.1, 0.95],
            "data_visualization": [0.1, 0.0, 0.9],
            "models": [0.6, 0.3, 0.1],
        }
    )


@pytest.fixture
def demo_dir(tmp_path):
    """A private copy of the shipped demo fixture."""
    dst = tmp_path / "demo"
    shutil.copytree(DEMO, dst, ignore=shutil.ignore_patterns("store", "__pycache__"))
    return dst


@pytest.fixture(scope="session")
def demo_resources():
    from skillmatch.embeddings import load_vectors
    from skillmatch.ontology import load_ontology
    from skillmatch.screenrank import Resources

    return Resources(
        general_ontology=load_ontology(DEMO / "general_ontology.csv", name="general"),
        domain_ontology=load_ontology(DEMO / "domain_ontology.csv", name="domain"),
        vectors=load_vectors(DEMO / "vectors.txt"),
    )


def _load_docs(sub):
    import json

    from skillmatch.docstore import Document

    return {p.stem: Document.from_dict(json.loads(p.read_text())) for p in sorted((DEMO / sub).glob("*.json"))}


@pytest.fixture(scope="session")
def demo_cvs():
    return _load_docs("cvs")


@pytest.fixture(scope="session")
def demo_jobs():
    return _load_docs("jobs")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
