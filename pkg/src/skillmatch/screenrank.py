"""Drop-then-score candidate ranking.

Candidates first pass an education gate; survivors are scored on four
axes (general skills, domain skills, culture, required skills) and
aggregated with recruiter interest weights.  The continuous aggregate is
the normalised weighted sum; ``mr_assign`` gives the majority-rule
category against boundary profiles.
"""

from __future__ import annotations

import csv
import io
import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, fields
from fractions import Fraction
from importlib import resources
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .culture import CultureGraph, CultureProfile, CultureProfileError, culture_match, load_culture_graph, pole_table, profile
from .docstore import Document, DocumentStore
from .embeddings import VectorStore
from .exceptions import ValidationError
from .graphsim import UNIT_COSTS, EditCostModel, similarity
from .ontology import Ontology, find_by_label
from .skillgraph import DEFAULT_THRESHOLD, DEFAULT_TOP_K, ConceptGraph, extract_sections
from .validation import check_score_matrix, check_weight_vector

AXES = ("skills", "domain_skills", "culture", "required_skills")
MAX_AXES = 7
AXIS_ALIASES = {
    "skills": "skills",
    "skill": "skills",
    "skillsmatch": "skills",
    "domain": "domain_skills",
    "domain_skills": "domain_skills",
    "domainskillsmatch": "domain_skills",
    "culture": "culture",
    "culturematch": "culture",
    "required": "required_skills",
    "required_skills": "required_skills",
    "requiredskillsmatch": "required_skills",
}
COLUMNS = {
    "domain_skills": "DomainSkillsMatch",
    "skills": "SkillsMatch",
    "culture": "CultureMatch",
    "required_skills": "RequiredSkillsMatch",
}
CSV_HEADER = ["ID", "DomainSkillsMatch", "SkillsMatch", "CultureMatch", "RequiredSkillsMatch", "MRValues", "Verdict"]
DEFAULT_LAMBDA = 0.6
DEFAULT_PROFILES = ((0.5, 0.5, 0.5, 0.5),)


# --- axes and weights -------------------------------------------------------


@dataclass(frozen=True)
class AxisScores:
    skills: float
    domain_skills: float
    culture: float
    required_skills: float

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not 0.0 <= v <= 1.0:
                raise ValidationError(f"{f.name} score {v} outside [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, a) for a in AXES], dtype=np.float64)

    def as_columns(self) -> dict[str, float]:
        return {COLUMNS[a]: getattr(self, a) for a in ("domain_skills", "skills", "culture", "required_skills")}


@dataclass(frozen=True)
class InterestWeights:
    """Recruiter interest per axis: 0 not, 1 poorly, 2 interested, 3 very."""

    skills: int = 0
    domain_skills: int = 0
    culture: int = 0
    required_skills: int = 0

    def __post_init__(self):
        if len(fields(self)) > MAX_AXES:
            raise ValidationError(f"at most {MAX_AXES} axes can be weighted")
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, bool) or not isinstance(v, (int, np.integer)) or not 0 <= v <= 3:
                raise ValidationError(f"weight for {f.name} must be an integer in 0..3, got {v!r}")
        if not any(getattr(self, f.name) for f in fields(self)):
            raise ValidationError("at least one axis weight must be positive")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, a) for a in AXES], dtype=np.float64)

    def to_dict(self) -> dict[str, int]:
        return {a: getattr(self, a) for a in AXES}

    @classmethod
    def parse(cls, text: str) -> "InterestWeights":
        """Parse ``axis=int`` pairs separated by commas; missing axes are 0."""
        values = {}
        for part in filter(None, (p.strip() for p in text.split(","))):
            key, sep, raw = part.partition("=")
            if not sep:
                raise ValidationError(f"expected axis=int, got {part!r}")
            axis = AXIS_ALIASES.get(key.strip().lower())
            if axis is None:
                raise ValidationError(f"unknown axis {key.strip()!r}; known: {sorted(set(AXIS_ALIASES))}")
            try:
                values[axis] = int(raw.strip())
            except ValueError:
                raise ValidationError(f"weight for {axis} is not an integer: {raw!r}") from None
        return cls(**values)


DEFAULT_WEIGHTS = InterestWeights(2, 2, 2, 0)


def _as_vector(x) -> np.ndarray:
    if isinstance(x, (AxisScores, InterestWeights)):
        return x.as_array()
    return np.asarray(x, dtype=np.float64)


def mr_aggregate(axes, weights) -> float:
    """Normalised weighted sum ``sum(w_i * a_i) / sum(w)``."""
    a = _as_vector(axes)
    w = check_weight_vector(_as_vector(weights), a.size)
    return float(np.dot(w / w.sum(), a))


def _check_profiles(profiles, n_axes: int) -> np.ndarray:
    P = np.asarray(profiles, dtype=np.float64)
    if P.ndim != 2 or P.shape[1] != n_axes or P.shape[0] < 1:
        raise ValidationError(f"profiles must be a non-empty (k, {n_axes}) array")
    if P.shape[0] > 1 and not np.all(np.diff(P, axis=0) > 0):
        raise ValidationError("profiles must be strictly increasing on every axis")
    return P


def mr_assign(axes, weights, profiles=DEFAULT_PROFILES, lam: float = DEFAULT_LAMBDA) -> int:
    """Majority-rule sorting category.

    With k ascending boundary profiles there are k + 1 categories, 0 lowest.
    The candidate lands in the highest category h whose lower boundary
    ``profiles[h-1]`` is cleared (``axis >= boundary``) by a coalition of
    normalised weight >= ``lam``.  Weight sums are exact rationals.
    """
    a = _as_vector(axes)
    w = check_weight_vector(_as_vector(weights), a.size)
    P = _check_profiles(profiles, a.size)
    if not 0.5 <= lam <= 1.0:
        raise ValidationError(f"lambda must be in [0.5, 1], got {lam}")
    fw = [Fraction(float(x)) for x in w]
    total = sum(fw)
    need = Fraction(float(lam)) * total
    for h in range(P.shape[0] - 1, -1, -1):
        coalition = sum((fw[i] for i in range(a.size) if a[i] >= P[h, i]), Fraction(0))
        if coalition >= need:
            return h + 1
    return 0


def order_by_aggregate(ids: Sequence[str], scores, weights) -> list[int]:
    """Row indices by descending aggregate, ties by id ascending."""
    S = check_score_matrix(scores)
    w = check_weight_vector(_as_vector(weights), S.shape[1])
    agg = S @ (w / w.sum())
    return sorted(range(len(ids)), key=lambda i: (-agg[i], ids[i]))


# --- education gate -----------------------------------------------------------


def _norm_degree(s: str) -> str:
    s = s.lower().replace("’", "'").replace(".", "")
    return re.sub(r"\s+", " ", s).strip()


@dataclass(frozen=True)
class DegreeLadder:
    levels: tuple[str, ...]
    equivalence: dict[str, str]

    def __post_init__(self):
        if len(set(self.levels)) != len(self.levels) or not self.levels:
            raise ValidationError("ladder levels must be unique and non-empty")
        norm = {}
        for raw, level in self.equivalence.items():
            if level not in self.levels:
                raise ValidationError(f"degree {raw!r} maps to unknown level {level!r}")
            norm[_norm_degree(raw)] = level
        object.__setattr__(self, "equivalence", norm)

    def rank(self, level: str) -> int:
        return self.levels.index(level)

    def lookup(self, raw: str) -> tuple[str, bool]:
        """Ladder level for a raw degree string and whether it was recognised.

        Whole-string matches win; otherwise the longest known keyword phrase
        inside the string decides (``"MSc in Data Science"`` -> master).
        """
        key = _norm_degree(raw)
        if key in self.equivalence:
            return self.equivalence[key], True
        words = re.findall(r"[a-z0-9+'\-]+", key)
        for n in range(min(4, len(words)), 0, -1):
            hits = [
                self.equivalence[" ".join(words[i:i + n])]
                for i in range(len(words) - n + 1)
                if " ".join(words[i:i + n]) in self.equivalence
            ]
            if hits:
                return max(hits, key=self.rank), True
        return self.levels[0], False


def load_degree_ladder(path=None) -> DegreeLadder:
    if path is None:
        text = resources.files("skillmatch.data").joinpath("degree_ladder.json").read_text(encoding="utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    return DegreeLadder(tuple(data["levels"]), dict(data["equivalence"]))


@dataclass(frozen=True)
class GateResult:
    passed: bool
    candidate_level: str
    required_level: str | None
    reason: str | None = None
    flags: tuple[str, ...] = ()


def education_gate(cv: Document, job: Document, ladder: DegreeLadder) -> GateResult:
    """Pass iff the CV's best degree is at least the job's lowest stated one."""
    flags = []
    required = None
    for e in job.education:
        level, known = ladder.lookup(e.degree_raw)
        if not known:
            flags.append(f"unrecognised job degree {e.degree_raw!r}")
            continue
        if required is None or ladder.rank(level) < ladder.rank(required):
            required = level
    best = ladder.levels[0]
    for e in cv.education:
        level, known = ladder.lookup(e.degree_raw)
        if not known:
            flags.append(f"unrecognised cv degree {e.degree_raw!r}")
        if ladder.rank(level) > ladder.rank(best):
            best = level
    if required is None or ladder.rank(best) >= ladder.rank(required):
        return GateResult(True, best, required, None, tuple(flags))
    reason = f"not qualified, reason: education level {best} below required {required}"
    return GateResult(False, best, required, reason, tuple(flags))


# --- required skills ----------------------------------------------------------


@dataclass(frozen=True)
class RequiredSkillResult:
    score: float
    matched: tuple[str, ...]
    missing: tuple[str, ...]


def required_skill_match(
    skills: Sequence[str],
    views: Sequence[tuple[ConceptGraph, Ontology]],
    threshold: float = DEFAULT_THRESHOLD,
) -> RequiredSkillResult:
    """Fraction of required skills whose concept (or an equivalent) is in a CV graph.

    ``views`` pairs each CV graph with the ontology it was built from; a
    skill counts once if any view contains it.
    """
    if not skills:
        return RequiredSkillResult(1.0, (), ())
    matched, missing = [], []
    for skill in skills:
        hit = False
        for graph, o in views:
            for concept, _ in find_by_label(o, skill, threshold):
                if o.representative(concept.id) in graph.nodes:
                    hit = True
                    break
            if hit:
                break
        (matched if hit else missing).append(skill)
    return RequiredSkillResult(len(matched) / len(skills), tuple(matched), tuple(missing))


def required_skill_score(job: Document, cv_graph: ConceptGraph, o: Ontology, threshold: float = DEFAULT_THRESHOLD) -> float:
    return required_skill_match(job.required_skills, [(cv_graph, o)], threshold).score


# --- scoring --------------------------------------------------------------------


@dataclass(frozen=True)
class Resources:
    """Everything scoring needs besides the documents themselves."""

    general_ontology: Ontology
    domain_ontology: Ontology
    vectors: VectorStore | None = None
    culture_graph: CultureGraph | None = None
    ladder: DegreeLadder | None = None
    cost_model: EditCostModel = UNIT_COSTS
    threshold: float = DEFAULT_THRESHOLD
    top_k: int = DEFAULT_TOP_K

    def __post_init__(self):
        if self.culture_graph is None:
            object.__setattr__(self, "culture_graph", load_culture_graph())
        if self.ladder is None:
            object.__setattr__(self, "ladder", load_degree_ladder())


@dataclass(frozen=True)
class DocumentFeatures:
    general: ConceptGraph
    domain: ConceptGraph
    culture: CultureProfile | None
    culture_error: str | None = None


def document_features(doc: Document, res: Resources) -> DocumentFeatures:
    kw = dict(threshold=res.threshold, k=res.top_k)
    general = extract_sections(doc, res.general_ontology, res.vectors, **kw)
    domain = extract_sections(doc, res.domain_ontology, res.vectors, **kw)
    prof, err = None, None
    if res.vectors is None:
        err = "no vector store loaded"
    else:
        try:
            prof = profile(doc.full_text(), res.culture_graph, res.vectors)
        except CultureProfileError as exc:
            err = str(exc)
    return DocumentFeatures(general, domain, prof, err)


def _labels(o: Ontology, ids) -> list[str]:
    return [o.label(i) for i in sorted(ids)]


def _graph_explanation(cv_g: ConceptGraph, job_g: ConceptGraph, o: Ontology, sim) -> dict:
    cv_ids, job_ids = set(cv_g.nodes), set(job_g.nodes)
    return {
        "matched": _labels(o, cv_ids & job_ids),
        "missing": _labels(o, job_ids - cv_ids),
        "extra": _labels(o, cv_ids - job_ids),
        "ged_lower": sim.lower,
        "ged_upper": sim.upper,
    }


def _score(cv: Document, cvf: DocumentFeatures, job: Document, jobf: DocumentFeatures, res: Resources):
    sim_g = similarity(cvf.general, jobf.general, res.cost_model)
    sim_d = similarity(cvf.domain, jobf.domain, res.cost_model)
    flags = []
    if cvf.culture is not None and jobf.culture is not None:
        cult = culture_match(cvf.culture, jobf.culture)
        cult_expl = pole_table(cvf.culture, jobf.culture)
    else:
        cult = 0.0
        cult_expl = []
        for who, f in (("cv", cvf), ("job", jobf)):
            if f.culture_error:
                flags.append(f"culture unavailable for {who}: {f.culture_error}")
    req = required_skill_match(
        job.required_skills,
        [(cvf.general, res.general_ontology), (cvf.domain, res.domain_ontology)],
        res.threshold,
    )
    axes = AxisScores(sim_g.similarity, sim_d.similarity, cult, req.score)
    expl = {
        "skills": _graph_explanation(cvf.general, jobf.general, res.general_ontology, sim_g),
        "domain_skills": _graph_explanation(cvf.domain, jobf.domain, res.domain_ontology, sim_d),
        "culture": cult_expl,
        "required_skills": {"matched": list(req.matched), "missing": list(req.missing)},
    }
    return axes, expl, flags


def score_axes(cv: Document, job: Document, res: Resources) -> AxisScores:
    """Four axis scores for a CV that already passed the gate."""
    return _score(cv, document_features(cv, res), job, document_features(job, res), res)[0]


# --- reports ------------------------------------------------------------------


@dataclass(frozen=True)
class MatchReport:
    cv_id: str
    job_id: str
    verdict: str
    rejection_reason: str | None = None
    axes: AxisScores | None = None
    aggregate: float | None = None
    category: int | None = None
    weights: InterestWeights | None = None
    explanations: dict = field(default_factory=dict)
    flags: tuple[str, ...] = ()

    def to_dict(self, explain: bool = False) -> dict:
        d = {
            "cv_id": self.cv_id,
            "job_id": self.job_id,
            "verdict": self.verdict,
            "rejection_reason": self.rejection_reason,
            "scores": self.axes.as_columns() if self.axes else None,
            "MRValues": self.aggregate,
            "category": self.category,
            "weights": self.weights.to_dict() if self.weights else None,
            "flags": list(self.flags),
        }
        if explain:
            d["explanations"] = self.explanations
        return d


@dataclass(frozen=True)
class RankedList:
    job_id: str
    weights: InterestWeights
    ranking: tuple[MatchReport, ...]
    rejected: tuple[MatchReport, ...]

    def ids(self) -> list[str]:
        return [r.cv_id for r in self.ranking]

    def to_dict(self, explain: bool = False) -> dict:
        return {
            "job_id": self.job_id,
            "weights": self.weights.to_dict(),
            "ranking": [dict(rank=i + 1, **r.to_dict(explain)) for i, r in enumerate(self.ranking)],
            "rejected": [r.to_dict(explain) for r in self.rejected],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for r in self.ranking:
            c = r.axes.as_columns()
            w.writerow([r.cv_id, *(f"{c[k]:.6f}" for k in CSV_HEADER[1:5]), f"{r.aggregate:.6f}", r.verdict])
        for r in self.rejected:
            w.writerow([r.cv_id, "", "", "", "", "", r.rejection_reason])
        return buf.getvalue()


class CandidateRanker(BaseEstimator):
    """Score and rank CVs against one job post.

    ``fit`` takes the job post and precomputes its graphs and culture
    profile; ``transform`` returns the (n, 4) axis matrix, with NaN rows for
    CVs rejected by the education gate; ``predict`` returns aggregates;
    ``rank`` builds the full RankedList.
    """

    def __init__(
        self,
        general_ontology=None,
        domain_ontology=None,
        vectors=None,
        culture_graph=None,
        ladder=None,
        weights=DEFAULT_WEIGHTS,
        cost_model=UNIT_COSTS,
        threshold=DEFAULT_THRESHOLD,
        top_k=DEFAULT_TOP_K,
        profiles=DEFAULT_PROFILES,
        lam=DEFAULT_LAMBDA,
        n_jobs=1,
    ):
        self.general_ontology = general_ontology
        self.domain_ontology = domain_ontology
        self.vectors = vectors
        self.culture_graph = culture_graph
        self.ladder = ladder
        self.weights = weights
        self.cost_model = cost_model
        self.threshold = threshold
        self.top_k = top_k
        self.profiles = profiles
        self.lam = lam
        self.n_jobs = n_jobs

    @classmethod
    def from_resources(cls, res: Resources, **params) -> "CandidateRanker":
        return cls(
            general_ontology=res.general_ontology,
            domain_ontology=res.domain_ontology,
            vectors=res.vectors,
            culture_graph=res.culture_graph,
            ladder=res.ladder,
            cost_model=res.cost_model,
            threshold=res.threshold,
            top_k=res.top_k,
            **params,
        )

    def fit(self, job: Document, y=None):
        if not isinstance(job, Document) or job.kind != "job_post":
            raise ValidationError("CandidateRanker.fit expects a job_post Document")
        weights = self.weights
        if isinstance(weights, str):
            weights = InterestWeights.parse(weights)
        elif isinstance(weights, dict):
            weights = InterestWeights(**weights)
        elif not isinstance(weights, InterestWeights):
            raise ValidationError("weights must be InterestWeights, a dict or an 'axis=int' string")
        _check_profiles(self.profiles, len(AXES))
        self.weights_ = weights
        self.resources_ = Resources(
            self.general_ontology,
            self.domain_ontology,
            self.vectors,
            self.culture_graph,
            self.ladder,
            self.cost_model,
            self.threshold,
            self.top_k,
        )
        self.job_ = job
        self.job_features_ = document_features(job, self.resources_)
        return self

    def report(self, cv: Document) -> MatchReport:
        check_is_fitted(self, "job_features_")
        if cv.kind != "cv":
            raise ValidationError(f"document {cv.id!r} is not a CV")
        gate = education_gate(cv, self.job_, self.resources_.ladder)
        if not gate.passed:
            return MatchReport(cv.id, self.job_.id, "rejected_education", gate.reason, weights=self.weights_, flags=gate.flags)
        cvf = document_features(cv, self.resources_)
        axes, expl, flags = _score(cv, cvf, self.job_, self.job_features_, self.resources_)
        expl["education"] = {"candidate_level": gate.candidate_level, "required_level": gate.required_level}
        return MatchReport(
            cv.id,
            self.job_.id,
            "scored",
            None,
            axes,
            mr_aggregate(axes, self.weights_),
            mr_assign(axes, self.weights_, self.profiles, self.lam),
            self.weights_,
            expl,
            gate.flags + tuple(flags),
        )

    def _reports(self, cvs: Sequence[Document]) -> list[MatchReport]:
        cvs = list(cvs)
        if self.n_jobs and self.n_jobs > 1 and len(cvs) > 1:
            with ThreadPoolExecutor(max_workers=self.n_jobs) as pool:
                return list(pool.map(self.report, cvs))
        return [self.report(cv) for cv in cvs]

    def transform(self, cvs: Sequence[Document]) -> np.ndarray:
        reports = self._reports(cvs)
        out = np.full((len(reports), len(AXES)), np.nan)
        for i, r in enumerate(reports):
            if r.axes is not None:
                out[i] = r.axes.as_array()
        return out

    def predict(self, cvs: Sequence[Document]) -> np.ndarray:
        return np.array([np.nan if r.aggregate is None else r.aggregate for r in self._reports(cvs)])

    def rank(self, cvs: Sequence[Document]) -> RankedList:
        reports = self._reports(cvs)
        scored = [r for r in reports if r.verdict == "scored"]
        rejected = sorted((r for r in reports if r.verdict != "scored"), key=lambda r: r.cv_id)
        if scored:
            order = order_by_aggregate([r.cv_id for r in scored], [r.axes.as_array() for r in scored], self.weights_)
            scored = [scored[i] for i in order]
        return RankedList(self.job_.id, self.weights_, tuple(scored), tuple(rejected))


def match_one(cv_id: str, job_id: str, weights, store: DocumentStore, res: Resources) -> MatchReport:
    job = store.get(job_id)
    cv = store.get(cv_id)
    return CandidateRanker.from_resources(res, weights=weights).fit(job).report(cv)


def match_many(cv_ids: Sequence[str], job_id: str, weights, store: DocumentStore, res: Resources, n_jobs: int = 1) -> RankedList:
    job = store.get(job_id)
    cvs = [store.get(i) for i in dict.fromkeys(cv_ids)]
    return CandidateRanker.from_resources(res, weights=weights, n_jobs=n_jobs).fit(job).rank(cvs)
