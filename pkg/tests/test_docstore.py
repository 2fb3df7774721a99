import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from skillmatch.docstore import (
    Document,
    DocumentStore,
    DuplicateDocumentError,
    content_id,
    get_document,
    put_document,
    validate_document,
)
from skillmatch.exceptions import NotFoundError, ValidationError


def cv_dict(doc_id="CV1", skills="Python, SQL", **extra):
    d = {
        "id": doc_id,
        "kind": "cv",
        "sections": {"summary": "Data person.", "experience": "Built pipelines.", "skills": skills},
        "education": [{"degree_raw": "MSc", "institution": "Paris", "year": 2020}],
        "required_skills": [],
        "language": "en",
    }
    d.update(extra)
    return d


def test_round_trip(tmp_path):
    store = DocumentStore(tmp_path)
    assert put_document(store, cv_dict()) == "CV1"
    doc = get_document(store, "CV1")
    assert doc == Document.from_dict(cv_dict())
    assert doc.to_dict() == cv_dict()


def test_cv_with_required_skills_rejected():
    with pytest.raises(ValidationError, match="required_skills"):
        Document.from_dict(cv_dict(required_skills=["python"]))


def test_missing_section_named():
    d = cv_dict()
    del d["sections"]["skills"]
    with pytest.raises(ValidationError, match="sections"):
        validate_document(d)


def test_bad_kind():
    with pytest.raises(ValidationError, match="kind"):
        validate_document(cv_dict(kind="resume"))


def test_duplicate_id(tmp_path):
    store = DocumentStore(tmp_path)
    store.put(cv_dict())
    with pytest.raises(DuplicateDocumentError):
        store.put(cv_dict(skills="Java"))
    store.put(cv_dict(skills="Java"), overwrite=True)
    assert store.get("CV1").sections["skills"] == "Java"


def test_identical_put_is_noop(tmp_path):
    store = DocumentStore(tmp_path)
    store.put(cv_dict())
    assert store.put(cv_dict()) == "CV1"


def test_unknown_id(tmp_path):
    with pytest.raises(NotFoundError):
        DocumentStore(tmp_path).get("nope")


def test_list_120(tmp_path):
    store = DocumentStore(tmp_path)
    for i in range(120):
        store.put(cv_dict(f"CV{i:03d}", skills=f"skill {i}"))
    job = cv_dict("J1", kind="job_post", required_skills=["python"])
    store.put(job)
    assert len(store.list("cv")) == 120
    assert store.list("cv") == sorted(store.list("cv"))
    assert store.list("job_post") == ["J1"]
    assert len(store.list()) == 121


def test_no_temp_files_left(tmp_path):
    store = DocumentStore(tmp_path)
    store.put(cv_dict())
    assert [p.name for p in (tmp_path / "cv").iterdir()] == ["CV1.json"]


def test_content_id_ignores_id():
    a = cv_dict("x")
    b = cv_dict("y")
    assert content_id(a) == content_id(b)
    assert len(content_id(a)) == 16


def test_derived_id_when_missing(tmp_path):
    d = cv_dict()
    del d["id"]
    doc_id = DocumentStore(tmp_path).put(d)
    assert doc_id == content_id(d)


@given(st.text(min_size=1, max_size=40))
def test_skills_text_round_trips(text):
    d = cv_dict(skills=text)
    doc = Document.from_dict(d)
    assert Document.from_dict(json.loads(json.dumps(doc.to_dict()))) == doc
