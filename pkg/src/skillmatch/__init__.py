"""Ontology-driven CV / job-post matching."""

from .culture import CultureGraph, CultureProfile, CultureProfiler, culture_match, load_culture_graph, profile
from .docstore import Document, DocumentStore, EducationEntry
from .embeddings import VectorStore, centroid, cosine, load_vectors, top_k
from .exceptions import NotFoundError, SkillmatchError, ValidationError
from .graphsim import EditCostModel, GedResult, LabeledGraph, ged_greedy, ged_hausdorff, similarity
from .ontology import Concept, Ontology, RelationKind, find_by_label, load_ontology, super_topics
from .screenrank import (
    AxisScores,
    CandidateRanker,
    DegreeLadder,
    InterestWeights,
    MatchReport,
    RankedList,
    Resources,
    education_gate,
    match_many,
    match_one,
    mr_aggregate,
    mr_assign,
    required_skill_score,
    score_axes,
)
from .skillgraph import ConceptGraph, SkillGraphExtractor, extract
from .taxonomy import TaxonomyBuilder

__version__ = "0.1.0"

__all__ = [
    "AxisScores",
    "CandidateRanker",
    "Concept",
    "ConceptGraph",
    "CultureGraph",
    "CultureProfile",
    "CultureProfiler",
    "DegreeLadder",
    "Document",
    "DocumentStore",
    "EditCostModel",
    "EducationEntry",
    "GedResult",
    "InterestWeights",
    "LabeledGraph",
    "MatchReport",
    "NotFoundError",
    "Ontology",
    "RankedList",
    "RelationKind",
    "Resources",
    "SkillGraphExtractor",
    "SkillmatchError",
    "TaxonomyBuilder",
    "ValidationError",
    "VectorStore",
    "centroid",
    "cosine",
    "culture_match",
    "education_gate",
    "extract",
    "find_by_label",
    "ged_greedy",
    "ged_hausdorff",
    "load_culture_graph",
    "load_ontology",
    "load_vectors",
    "match_many",
    "match_one",
    "mr_aggregate",
    "mr_assign",
    "profile",
    "required_skill_score",
    "score_axes",
    "similarity",
    "super_topics",
    "top_k",
]
