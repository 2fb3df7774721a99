"""JSON document store for parsed CVs and job posts.

Layout: ``<root>/{cv,job_post}/<id>.json``, one document per file.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Any

import jsonschema

from .exceptions import NotFoundError, ValidationError

KINDS = ("cv", "job_post")


class DuplicateDocumentError(ValidationError):
    """A document with the same id but different content already exists."""


@dataclass(frozen=True)
class EducationEntry:
    degree_raw: str
    institution: str | None = None
    year: int | None = None


@dataclass(frozen=True)
class Document:
    id: str
    kind: str
    sections: dict[str, str]
    education: tuple[EducationEntry, ...] = ()
    required_skills: tuple[str, ...] = ()
    language: str = "en"

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["education"] = [
            {k: v for k, v in e.items() if v is not None} for e in d["education"]
        ]
        d["required_skills"] = list(self.required_skills)
        d["sections"] = dict(sorted(self.sections.items()))
        return d

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Document":
        """Validate ``data`` against the schema; derive the id if missing."""
        validate_document(data)
        doc_id = data.get("id") or content_id(data)
        return cls(
            id=doc_id,
            kind=data["kind"],
            sections=dict(data["sections"]),
            education=tuple(
                EducationEntry(e["degree_raw"], e.get("institution"), e.get("year"))
                for e in data.get("education", [])
            ),
            required_skills=tuple(data.get("required_skills", [])),
            language=data.get("language", "en"),
        )

    def full_text(self, sections=("summary", "experience", "skills")) -> str:
        return "\n".join(self.sections.get(s, "") for s in sections)


@lru_cache(maxsize=None)
def document_schema() -> dict:
    text = resources.files("skillmatch.data").joinpath("document.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate_document(data: Any) -> None:
    """Raise ValidationError naming the first offending field."""
    validator = jsonschema.Draft202012Validator(document_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        where = "/".join(str(p) for p in err.absolute_path) or "<root>"
        if list(err.absolute_path) == ["required_skills"] and data.get("kind") == "cv":
            raise ValidationError("required_skills: must be empty for kind=cv")
        raise ValidationError(f"{where}: {err.message}")


def canonical_json(data: dict) -> str:
    return json.dumps(data, sort_keys=True, ensure_ascii=False, separators=(",", ":"))


def content_id(data: dict) -> str:
    """First 16 hex digits of the SHA-256 of the canonical content (id excluded)."""
    body = {k: v for k, v in data.items() if k != "id"}
    return hashlib.sha256(canonical_json(body).encode("utf-8")).hexdigest()[:16]


@dataclass
class DocumentStore:
    """Directory-backed store; single writer, any number of readers."""

    root: Path

    def __post_init__(self):
        self.root = Path(self.root)

    def _path(self, kind: str, doc_id: str) -> Path:
        return self.root / kind / f"{doc_id}.json"

    def _locate(self, doc_id: str) -> Path | None:
        for kind in KINDS:
            p = self._path(kind, doc_id)
            if p.is_file():
                return p
        return None

    def put(self, doc: Document | dict, overwrite: bool = False) -> str:
        """Store ``doc`` atomically and return its id.

        Re-putting identical content is a no-op; different content under an
        existing id needs ``overwrite=True``.
        """
        if isinstance(doc, dict):
            doc = Document.from_dict(doc)
        else:
            validate_document(doc.to_dict())
        existing = self._locate(doc.id)
        if existing is not None and not overwrite:
            if self.get(doc.id) == doc:
                return doc.id
            raise DuplicateDocumentError(f"document id {doc.id!r} already exists")
        if existing is not None and existing.parent.name != doc.kind:
            existing.unlink()
        target = self._path(doc.kind, doc.id)
        target.parent.mkdir(parents=True, exist_ok=True)
        payload = json.dumps(doc.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(payload)
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return doc.id

    def exists(self, doc_id: str) -> bool:
        return self._locate(doc_id) is not None

    def get(self, doc_id: str) -> Document:
        p = self._locate(doc_id)
        if p is None:
            raise NotFoundError(f"no document with id {doc_id!r}")
        with open(p, encoding="utf-8") as fh:
            return Document.from_dict(json.load(fh))

    def list(self, kind: str | None = None) -> list[str]:
        """Ids sorted lexicographically, optionally restricted to one kind."""
        if kind is not None and kind not in KINDS:
            raise ValueError(f"unknown kind {kind!r}")
        ids = []
        for k in KINDS if kind is None else (kind,):
            d = self.root / k
            if d.is_dir():
                ids.extend(p.stem for p in d.glob("*.json") if not p.name.startswith(".tmp-"))
        return sorted(ids)


def put_document(store: DocumentStore, doc, overwrite: bool = False) -> str:
    return store.put(doc, overwrite=overwrite)


def get_document(store: DocumentStore, doc_id: str) -> Document:
    return store.get(doc_id)
