"""``skillmatch`` command line.

Exit codes: 0 success (negative verdicts included), 1 usage error,
2 data or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .config import load_config
from .culture import load_culture_graph
from .docstore import KINDS, Document, DocumentStore, document_schema
from .embeddings import load_vectors
from .exceptions import SkillmatchError
from .ontology import load_ontology, write_ontology
from .screenrank import InterestWeights, Resources, load_degree_ladder, match_many, match_one
from .skillgraph import extract, extract_sections
from .taxonomy import DEFAULT_K, DEFAULT_TOP_N, TaxonomyBuilder

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


def _resources(cfg, need_domain=True) -> Resources:
    keys = ["general_ontology"] + (["domain_ontology"] if need_domain else [])
    cfg.require(*keys)
    for opt in ("vectors", "culture_graph", "ladder"):
        if getattr(cfg, opt) is not None:
            cfg.require(opt)
    general = load_ontology(cfg.general_ontology, name="general")
    domain = load_ontology(cfg.domain_ontology, name="domain") if cfg.domain_ontology else general
    return Resources(
        general_ontology=general,
        domain_ontology=domain,
        vectors=load_vectors(cfg.vectors) if cfg.vectors else None,
        culture_graph=load_culture_graph(cfg.culture_graph),
        ladder=load_degree_ladder(cfg.ladder),
        threshold=cfg.threshold,
        top_k=cfg.top_k,
    )


def _weights(args, cfg) -> InterestWeights:
    return InterestWeights.parse(args.weights if args.weights is not None else cfg.weights)


def cmd_ingest(args, cfg) -> int:
    src = Path(args.path)
    if not src.exists():
        raise SkillmatchError(f"cannot read {src}")
    files = sorted(src.glob("*.json")) if src.is_dir() else [src]
    store = DocumentStore(cfg.store_dir)
    summary = {"stored": [], "failed": []}
    for f in files:
        try:
            data = json.loads(f.read_text(encoding="utf-8"))
            if args.kind:
                data.setdefault("kind", args.kind)
                if data["kind"] != args.kind:
                    raise SkillmatchError(f"kind is {data['kind']!r}, expected {args.kind!r}")
            doc_id = store.put(Document.from_dict(data), overwrite=args.overwrite)
            summary["stored"].append({"path": str(f), "id": doc_id})
        except (SkillmatchError, json.JSONDecodeError, OSError) as exc:
            summary["failed"].append({"path": str(f), "error": str(exc)})
    _emit(summary)
    return EXIT_OK if not summary["failed"] else EXIT_DATA


def cmd_extract(args, cfg) -> int:
    res = _resources(cfg, need_domain=args.ontology == "domain")
    o = res.domain_ontology if args.ontology == "domain" else res.general_ontology
    doc = DocumentStore(cfg.store_dir).get(args.doc)
    kw = dict(threshold=res.threshold, k=res.top_k)
    if args.section:
        graph = extract(doc.sections.get(args.section, ""), o, res.vectors, **kw)
    else:
        graph = extract_sections(doc, o, res.vectors, **kw)
    _emit(graph.to_dict())
    return EXIT_OK


def cmd_match(args, cfg) -> int:
    weights = _weights(args, cfg)
    res = _resources(cfg)
    report = match_one(args.cv, args.job, weights, DocumentStore(cfg.store_dir), res)
    _emit(report.to_dict(explain=args.explain))
    return EXIT_OK


def cmd_rank(args, cfg) -> int:
    weights = _weights(args, cfg)
    res = _resources(cfg)
    store = DocumentStore(cfg.store_dir)
    store.get(args.job)
    cv_ids = args.cv if args.cv else store.list("cv")
    ranked = match_many(cv_ids, args.job, weights, store, res, n_jobs=args.jobs)
    if args.format == "csv":
        sys.stdout.write(ranked.to_csv())
    else:
        _emit(ranked.to_dict(explain=args.explain))
    return EXIT_OK


def _read_corpus(path: Path) -> list:
    if not path.is_dir():
        raise SkillmatchError(f"corpus directory not found: {path}")
    docs = []
    for f in sorted(path.iterdir()):
        if f.suffix == ".json":
            docs.append(Document.from_dict(json.loads(f.read_text(encoding="utf-8"))))
        elif f.suffix == ".txt":
            docs.append(f.read_text(encoding="utf-8"))
    return docs


def cmd_taxonomy_build(args, cfg) -> int:
    corpus = _read_corpus(Path(args.corpus))
    vs = load_vectors(args.vectors)
    builder = TaxonomyBuilder(vectors=vs, top_n=args.top_n, n_clusters=args.k, random_state=args.seed).fit(corpus)
    write_ontology(builder.ontology_, args.out)
    _emit(
        {
            "out": str(args.out),
            "candidates": len(builder.table_),
            "excluded": list(builder.clusters_.excluded),
            "clusters": [list(c.members) for c in builder.clusters_.clusters],
            "iterations": builder.clusters_.n_iter,
        }
    )
    return EXIT_OK


def cmd_schema(args, cfg) -> int:
    _emit(document_schema())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="skillmatch", description="Match CVs to job posts over skill graphs and culture profiles.")
    p.add_argument("--config", help="key = value config file (default: $SKILLMATCH_CONFIG)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("ingest", help="validate and store JSON documents")
    s.add_argument("path", help="a JSON file or a directory of *.json")
    s.add_argument("--kind", choices=KINDS)
    s.add_argument("--overwrite", action="store_true")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("extract", help="print the concept graph of a stored document")
    s.add_argument("--doc", required=True)
    s.add_argument("--ontology", choices=("general", "domain"), default="general")
    s.add_argument("--section", help="single section instead of skills + experience")
    s.set_defaults(func=cmd_extract)

    s = sub.add_parser("match", help="one CV against one job post")
    s.add_argument("--cv", required=True)
    s.add_argument("--job", required=True)
    s.add_argument("--weights", help="e.g. skills=2,domain=2,culture=2,required=0")
    s.add_argument("--explain", action="store_true", help="include per-axis explanations")
    s.set_defaults(func=cmd_match)

    s = sub.add_parser("rank", help="rank CVs against one job post")
    s.add_argument("--job", required=True)
    s.add_argument("--cv", action="append", help="restrict to these CV ids (repeatable)")
    s.add_argument("--weights")
    s.add_argument("--format", choices=("json", "csv"), default="json")
    s.add_argument("--jobs", type=int, default=1, help="parallel scoring threads")
    s.add_argument("--explain", action="store_true")
    s.set_defaults(func=cmd_rank)

    s = sub.add_parser("taxonomy", help="draft ontology tools")
    tsub = s.add_subparsers(dest="taxonomy_command", required=True, parser_class=_Parser)
    b = tsub.add_parser("build", help="bootstrap a draft ontology from a corpus")
    b.add_argument("--corpus", required=True)
    b.add_argument("--vectors", required=True)
    b.add_argument("--top-n", type=int, default=DEFAULT_TOP_N)
    b.add_argument("--k", type=int, default=DEFAULT_K)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_taxonomy_build)

    s = sub.add_parser("schema", help="print the Document JSON schema")
    s.set_defaults(func=cmd_schema)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = load_config(args.config)
        return args.func(args, cfg)
    except (SkillmatchError, OSError, json.JSONDecodeError) as exc:
        print(f"skillmatch: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"skillmatch: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
