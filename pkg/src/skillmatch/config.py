"""Flat ``key = value`` run configuration.

Relative paths resolve against the directory holding the config file.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass
from pathlib import Path

from .exceptions import ValidationError

ENV_VAR = "SKILLMATCH_CONFIG"
PATH_KEYS = ("store_dir", "general_ontology", "domain_ontology", "culture_graph", "vectors", "ladder")
KNOWN_KEYS = PATH_KEYS + ("weights", "threshold", "top_k")


@dataclass(frozen=True)
class RunConfig:
    store_dir: Path
    general_ontology: Path | None = None
    domain_ontology: Path | None = None
    culture_graph: Path | None = None
    vectors: Path | None = None
    ladder: Path | None = None
    weights: str = "skills=2,domain=2,culture=2,required=0"
    threshold: float = 0.94
    top_k: int = 10

    def require(self, *keys: str) -> None:
        """Check that the given path settings are set and exist on disk."""
        for key in keys:
            value = getattr(self, key)
            if value is None:
                raise ValidationError(f"config: {key} is not set")
            if key == "store_dir":
                continue
            if not Path(value).is_file():
                raise ValidationError(f"config: {key} file not found: {value}")


def parse_config(text: str, base: Path | str = ".") -> RunConfig:
    parser = configparser.ConfigParser(interpolation=None, comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string("[run]\n" + text)
    except configparser.Error as exc:
        raise ValidationError(f"config: {exc}") from None
    values = dict(parser["run"])
    unknown = sorted(set(values) - set(KNOWN_KEYS))
    if unknown:
        raise ValidationError(f"config: unknown keys {unknown}")
    base = Path(base)
    kw: dict = {}
    for key in PATH_KEYS:
        if values.get(key):
            p = Path(os.path.expanduser(values[key]))
            kw[key] = p if p.is_absolute() else base / p
    if "store_dir" not in kw:
        kw["store_dir"] = base / "store"
    if values.get("weights"):
        kw["weights"] = values["weights"]
    try:
        if values.get("threshold"):
            kw["threshold"] = float(values["threshold"])
        if values.get("top_k"):
            kw["top_k"] = int(values["top_k"])
    except ValueError as exc:
        raise ValidationError(f"config: {exc}") from None
    return RunConfig(**kw)


def load_config(path: str | os.PathLike | None = None) -> RunConfig:
    """Read ``path``, else ``$SKILLMATCH_CONFIG``, else defaults rooted at cwd."""
    path = path or os.environ.get(ENV_VAR)
    if not path:
        return RunConfig(store_dir=Path("store"))
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"config file not found: {p}")
    return parse_config(p.read_text(encoding="utf-8"), p.parent)
