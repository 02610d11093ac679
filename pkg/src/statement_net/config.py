"""Pipeline configuration: a YAML file plus command-line overrides.

Precedence is flag > environment (output directory only) > config file > default.
Relative paths in a config file resolve against the file's directory.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from pathlib import Path

import yaml

from .errors import ValidationError

OUTPUT_DIR_ENV = "STATEMENT_NET_OUTPUT_DIR"

PATH_FIELDS = ("corpus", "gazetteer", "external_tags", "merge_rules", "lexicon", "output_dir")


@dataclass
class PipelineConfig:
    corpus: Path | None = None
    gazetteer: Path | None = None
    external_tags: Path | None = None
    merge_rules: Path | None = None
    lexicon: Path | None = None
    quote_trigger: bool = True
    require_both: bool = False
    include_headline: bool = False
    on_error: str = "fail"
    series_months: int = 1
    bucket_months: int = 6
    bucket_threshold: int = 7
    overlap_metric: str = "jaccard"
    trajectory_nodes: list[str] = field(default_factory=list)
    output_dir: Path = Path("out")
    # values as written by the user, for the run manifest
    raw: dict = field(default_factory=dict, repr=False, compare=False)

    def snapshot(self) -> dict:
        """Configuration as recorded in the manifest (paths as the user wrote them)."""
        out = {}
        for f in fields(self):
            if f.name == "raw":
                continue
            if f.name in self.raw:
                out[f.name] = self.raw[f.name]
            else:
                value = getattr(self, f.name)
                out[f.name] = str(value) if isinstance(value, Path) else value
        return out

    def validate(self, need_corpus: bool = False, need_tagger: bool = False) -> "PipelineConfig":
        if need_corpus:
            if self.corpus is None:
                raise ValidationError("no corpus configured (set 'corpus' or pass --corpus)")
            if not self.corpus.is_file():
                raise ValidationError(f"corpus file not found: {self.corpus}")
        if need_tagger:
            if (self.gazetteer is None) == (self.external_tags is None):
                raise ValidationError("configure exactly one tagger: 'gazetteer' or 'external_tags'")
            if self.gazetteer is not None and not self.gazetteer.is_file():
                raise ValidationError(f"gazetteer not found: {self.gazetteer}")
            if self.external_tags is not None and not self.external_tags.is_dir():
                raise ValidationError(f"external tags directory not found: {self.external_tags}")
            for name in ("merge_rules", "lexicon"):
                path = getattr(self, name)
                if path is not None and not path.is_file():
                    raise ValidationError(f"{name.replace('_', ' ')} file not found: {path}")
        for name in ("series_months", "bucket_months"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if not isinstance(self.bucket_threshold, int) or self.bucket_threshold < 0:
            raise ValidationError(f"bucket_threshold must be a non-negative integer, got {self.bucket_threshold!r}")
        if self.on_error not in ("fail", "skip"):
            raise ValidationError(f"on_error must be 'fail' or 'skip', got {self.on_error!r}")
        if self.overlap_metric not in ("jaccard", "containment"):
            raise ValidationError(f"overlap_metric must be 'jaccard' or 'containment', got {self.overlap_metric!r}")
        if self.require_both and not self.quote_trigger:
            raise ValidationError("--require-both conflicts with --no-quote-trigger")
        return self


def _coerce(values: dict, base: Path) -> dict:
    known = {f.name for f in fields(PipelineConfig)} - {"raw"}
    unknown = set(values) - known
    if unknown:
        raise ValidationError(f"unknown config keys: {', '.join(sorted(unknown))}")
    out = dict(values)
    for name in PATH_FIELDS:
        if out.get(name) is not None:
            path = Path(os.path.expanduser(str(out[name])))
            out[name] = path if path.is_absolute() else base / path
    if "trajectory_nodes" in out and out["trajectory_nodes"] is None:
        out["trajectory_nodes"] = []
    return out


def load_config(path=None, overrides: dict | None = None, environ=None) -> PipelineConfig:
    environ = os.environ if environ is None else environ
    values: dict = {}
    raw: dict = {}
    if path is not None:
        path = Path(path)
        try:
            loaded = yaml.safe_load(path.read_text(encoding="utf-8"))
        except OSError as exc:
            raise ValidationError(f"cannot read config {path}: {exc}") from exc
        except yaml.YAMLError as exc:
            raise ValidationError(f"invalid config {path}: {exc}") from exc
        loaded = loaded or {}
        if not isinstance(loaded, dict):
            raise ValidationError(f"config {path} must be a mapping")
        raw.update(loaded)
        values.update(_coerce(loaded, path.parent))
    env_out = environ.get(OUTPUT_DIR_ENV)
    if env_out:
        values["output_dir"] = Path(env_out)
        raw["output_dir"] = env_out
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    if overrides:
        # a tagger chosen on the command line replaces the configured one
        for chosen, other in (("gazetteer", "external_tags"), ("external_tags", "gazetteer")):
            if chosen in overrides:
                values.pop(other, None)
                raw.pop(other, None)
        raw.update({k: str(v) if isinstance(v, Path) else v for k, v in overrides.items()})
        values.update(_coerce(overrides, Path.cwd()))
    try:
        cfg = PipelineConfig(**values)
    except TypeError as exc:
        raise ValidationError(str(exc)) from exc
    cfg.raw = raw
    return cfg


def dump_config(cfg: PipelineConfig) -> str:
    return yaml.safe_dump(cfg.snapshot(), sort_keys=True)

