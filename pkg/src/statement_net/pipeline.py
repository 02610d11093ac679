"""End-to-end orchestration and the per-stage commands behind the CLI.

Every stage reads and writes plain files in the output directory, so any stage
can be rerun on its own from the intermediates of the previous one:

=====================  ============================  ====================
file                   written by                    read by
=====================  ============================  ====================
corpus_stats.json      ingest-stats, extract         trajectories, buckets, daily-counts
statements.jsonl       extract                       network, trajectories, buckets, daily-counts
edges.tsv, events.tsv  network                       cores
buckets.json           buckets                       overlap
=====================  ============================  ====================
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import date
from pathlib import Path

from . import __version__
from .config import PipelineConfig
from .corpus import Corpus, CorpusStats, IngestOptions, corpus_stats, ingest_corpus
from .errors import InvariantError, StatementNetError, ValidationError
from .graph import (
    StatementNetwork,
    build_network,
    k_core_decompose,
    read_edge_list,
    top_core,
    write_edge_list,
    write_events,
)
from .io import atomic_write_text, read_jsonl, write_csv, write_json, write_jsonl
from .statements import SpeechLexicon, StatementSentence, select_statements
from .tagging import ExternalTags, Gazetteer, load_merge_rules
from .temporal import (
    HierarchyBucket,
    Period,
    build_snapshot_series,
    core_rank_trajectories,
    daily_edge_counts,
    distribution_summary,
    hierarchy_buckets,
    overlap_series,
    top_core_emergence,
)

logger = logging.getLogger(__name__)

CORPUS_STATS = "corpus_stats.json"
EXTRACT = "extract.json"
STATEMENTS = "statements.jsonl"
EDGES = "edges.tsv"
EVENTS = "events.tsv"
CORES_CSV = "cores.csv"
CORES_JSON = "cores.json"
TRAJECTORIES = "trajectories.csv"
TRAJECTORIES_PER_PERIOD = "trajectories_per_period.csv"
TRAJECTORIES_JSON = "trajectories.json"
BUCKETS_CSV = "buckets.csv"
BUCKETS_JSON = "buckets.json"
OVERLAP = "overlap.csv"
DAILY_DIR = "daily_counts"
DAILY_JSON = "daily_summary.json"
SUMMARY = "summary.json"
MANIFEST = "manifest.json"
INCOMPLETE = "INCOMPLETE"


@contextmanager
def stage(name: str):
    try:
        yield
    except StatementNetError as exc:
        if not hasattr(exc, "stage"):
            exc.stage = name
        raise
    except Exception as exc:
        err = InvariantError(f"unexpected {type(exc).__name__}: {exc}")
        err.stage = name
        raise err from exc


def _require(path: Path, producer: str) -> Path:
    if not path.exists():
        raise ValidationError(f"missing intermediate {path}; run `statement-net {producer}` first")
    return path


def slug(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-") or "source"


def file_digest(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            h.update(chunk)
    return h.hexdigest()


def load_tagger(cfg: PipelineConfig):
    if cfg.external_tags is not None:
        return ExternalTags(cfg.external_tags)
    return Gazetteer.from_file(cfg.gazetteer)


def load_lexicon(cfg: PipelineConfig) -> SpeechLexicon:
    if cfg.lexicon is not None:
        return SpeechLexicon.from_file(cfg.lexicon, cfg.quote_trigger, cfg.require_both)
    return SpeechLexicon.default(cfg.quote_trigger, cfg.require_both)


@dataclass
class Extraction:
    articles: int
    sentences: int
    statements: list[StatementSentence]


def extract_corpus(corpus: Corpus, tagger, lexicon: SpeechLexicon, rules, include_headline=False) -> Extraction:
    statements: list[StatementSentence] = []
    n_sentences = 0
    for article in corpus:
        sentences = tagger.sentences(article, include_headline=include_headline)
        n_sentences += len(sentences)
        statements.extend(select_statements(article, sentences, tagger, lexicon, rules))
    return Extraction(len(corpus), n_sentences, statements)


# -- stages -----------------------------------------------------------------


def ingest(cfg: PipelineConfig) -> tuple[Corpus, CorpusStats]:
    corpus = ingest_corpus(cfg.corpus, IngestOptions(on_error=cfg.on_error))
    stats = corpus_stats(corpus)
    write_json(cfg.output_dir / CORPUS_STATS, stats.to_dict())
    return corpus, stats


def extract(cfg: PipelineConfig, corpus: Corpus) -> Extraction:
    tagger = load_tagger(cfg)
    rules = load_merge_rules(cfg.merge_rules) if cfg.merge_rules is not None else []
    result = extract_corpus(corpus, tagger, load_lexicon(cfg), rules, cfg.include_headline)
    write_jsonl(cfg.output_dir / STATEMENTS, [s.to_record() for s in result.statements])
    write_json(
        cfg.output_dir / EXTRACT,
        {"articles": result.articles, "sentences": result.sentences, "statements": len(result.statements)},
    )
    return result


def network_stage(cfg: PipelineConfig, statements) -> StatementNetwork:
    network = build_network(statements)
    write_edge_list(network, cfg.output_dir / EDGES)
    write_events(network, cfg.output_dir / EVENTS)
    return network


def cores_stage(cfg: PipelineConfig, network: StatementNetwork) -> dict:
    dec = k_core_decompose(network)
    rows = sorted(dec.core_number.items(), key=lambda kv: (-kv[1], kv[0]))
    write_csv(cfg.output_dir / CORES_CSV, ["node", "core_number"], rows)
    summary = {
        "nodes": len(network.nodes),
        "simple_edges": len(network.simple_edges),
        "max_core": dec.max_core,
        "n_shells": dec.n_shells,
        "shell_sizes": {str(k): len(v) for k, v in dec.shells.items()},
        "top_core": sorted(top_core(dec)) if network.nodes else [],
    }
    write_json(cfg.output_dir / CORES_JSON, summary)
    return summary


def trajectories_stage(cfg: PipelineConfig, statements, span) -> dict:
    out = cfg.output_dir
    cumulative = build_snapshot_series(statements, cfg.series_months, "cumulative", span)
    per_period = build_snapshot_series(statements, cfg.series_months, "per-period", span)
    if not cumulative.snapshots:
        write_csv(out / TRAJECTORIES, ["period", "node", "core_rank"], [])
        write_csv(out / TRAJECTORIES_PER_PERIOD, ["period", "node", "core_rank"], [])
        summary = {"core_rank": "core number", "periods": 0, "nodes": [], "emergence": None}
        write_json(out / TRAJECTORIES_JSON, summary)
        return summary

    final_top = sorted(top_core(cumulative.decompositions[-1]))
    nodes = list(cfg.trajectory_nodes) or final_top
    for name, series in ((TRAJECTORIES, cumulative), (TRAJECTORIES_PER_PERIOD, per_period)):
        rows = []
        trajectories = core_rank_trajectories(series, nodes)
        for i, period in enumerate(series.periods):
            for traj in trajectories:
                rows.append([period.label, traj.node, traj.values[i][1]])
        write_csv(out / name, ["period", "node", "core_rank"], rows)

    emergence = top_core_emergence(cumulative)
    summary = {
        "core_rank": "core number",
        "periods": len(cumulative),
        "months_per_period": cfg.series_months,
        "nodes": sorted(set(nodes)),
        "final_top_core": final_top,
        "emergence": {
            "period": emergence.label,
            "index": emergence.index,
            "never_before_final": emergence.index == len(cumulative) and len(cumulative) > 1,
        },
    }
    write_json(out / TRAJECTORIES_JSON, summary)
    return summary


def _bucket_record(b: HierarchyBucket) -> dict:
    p = b.period
    return {
        "period": p.label,
        "index": p.index,
        "start": p.start.isoformat(),
        "end": p.end.isoformat(),
        "months": p.months,
        "partial": p.partial,
        "threshold": b.threshold,
        "members": sorted(b.members),
    }


def _bucket_from_record(r: dict) -> HierarchyBucket:
    period = Period(r["index"], date.fromisoformat(r["start"]), date.fromisoformat(r["end"]), r["months"], r["partial"])
    return HierarchyBucket(period, r["threshold"], frozenset(r["members"]))


def buckets_stage(cfg: PipelineConfig, statements, span) -> list[HierarchyBucket]:
    buckets = hierarchy_buckets(statements, cfg.bucket_months, cfg.bucket_threshold, span)
    rows = [[b.period.label, node] for b in buckets for node in sorted(b.members)]
    write_csv(cfg.output_dir / BUCKETS_CSV, ["period", "node"], rows)
    write_json(cfg.output_dir / BUCKETS_JSON, [_bucket_record(b) for b in buckets])
    return buckets


def overlap_stage(cfg: PipelineConfig, buckets) -> dict:
    series = overlap_series(buckets, cfg.overlap_metric)
    rows = [[p.label, f"{p.percent:.4f}", int(p.empty)] for p in series.points]
    write_csv(cfg.output_dir / OVERLAP, ["period_pair", "percent", "both_empty"], rows)
    return {"metric": series.metric, "percents": [round(p, 4) for p in series.percents]}


def daily_stage(cfg: PipelineConfig, statements, stats: CorpusStats, sources=None) -> dict:
    ranges = stats.date_ranges()
    sources = sorted(ranges) if sources is None else sources
    summaries = {}
    for source in sources:
        counts = daily_edge_counts(statements, source, ranges)
        write_csv(
            cfg.output_dir / DAILY_DIR / f"{slug(source)}.csv",
            ["date", "count"],
            [[d.isoformat(), c] for d, c in counts.counts.items()],
        )
        summaries[source] = distribution_summary(counts).to_dict()
    path = cfg.output_dir / DAILY_JSON
    if sources != sorted(ranges) and path.exists():
        # single-source rerun: keep the other sources' summaries
        merged = json.loads(path.read_text(encoding="utf-8"))
        merged.update(summaries)
        summaries = merged
    write_json(path, dict(sorted(summaries.items())))
    return summaries


# -- cached intermediates ---------------------------------------------------


def read_statements(cfg: PipelineConfig) -> list[StatementSentence]:
    path = _require(cfg.output_dir / STATEMENTS, "extract")
    return [StatementSentence.from_record(r) for r in read_jsonl(path)]


def read_stats(cfg: PipelineConfig) -> CorpusStats:
    path = _require(cfg.output_dir / CORPUS_STATS, "ingest-stats")
    return CorpusStats.from_dict(json.loads(path.read_text(encoding="utf-8")))


def read_buckets(cfg: PipelineConfig) -> list[HierarchyBucket]:
    path = _require(cfg.output_dir / BUCKETS_JSON, "buckets")
    return [_bucket_from_record(r) for r in json.loads(path.read_text(encoding="utf-8"))]


# -- subcommands ------------------------------------------------------------


def cmd_ingest_stats(cfg: PipelineConfig) -> str:
    cfg.validate(need_corpus=True)
    with stage("ingest"):
        corpus, stats = ingest(cfg)
    per = ", ".join(f"{s.source}: {s.articles}" for s in stats.sources)
    return f"{stats.total_articles} articles from {len(stats.sources)} sources ({per})"


def cmd_extract(cfg: PipelineConfig) -> str:
    cfg.validate(need_corpus=True, need_tagger=True)
    with stage("ingest"):
        corpus, _ = ingest(cfg)
    with stage("extract"):
        result = extract(cfg, corpus)
    return f"{len(result.statements)} statements from {result.sentences} sentences in {result.articles} articles"


def cmd_network(cfg: PipelineConfig) -> str:
    statements = read_statements(cfg)
    with stage("network"):
        net = network_stage(cfg, statements)
    return f"{len(net.nodes)} nodes, {len(net.simple_edges)} simple edges, {len(net.events)} events"


def cmd_cores(cfg: PipelineConfig) -> str:
    net = read_edge_list(_require(cfg.output_dir / EDGES, "network"))
    with stage("cores"):
        summary = cores_stage(cfg, net)
    return f"max_core {summary['max_core']}, top-core size {len(summary['top_core'])}, shells {summary['n_shells']}"


def cmd_trajectories(cfg: PipelineConfig) -> str:
    statements = read_statements(cfg)
    stats = read_stats(cfg)
    with stage("trajectories"):
        summary = trajectories_stage(cfg, statements, stats.span)
    if summary["emergence"] is None:
        return "0 periods, no trajectories"
    return (
        f"{summary['periods']} periods, {len(summary['nodes'])} trajectories, "
        f"top core emerges at period {summary['emergence']['index']} ({summary['emergence']['period']})"
    )


def cmd_buckets(cfg: PipelineConfig) -> str:
    statements = read_statements(cfg)
    stats = read_stats(cfg)
    with stage("buckets"):
        buckets = buckets_stage(cfg, statements, stats.span)
    sizes = ",".join(str(len(b.members)) for b in buckets)
    return f"{len(buckets)} buckets (threshold > {cfg.bucket_threshold}), sizes [{sizes}]"


def cmd_overlap(cfg: PipelineConfig) -> str:
    buckets = read_buckets(cfg)
    if len(buckets) < 2:
        raise ValidationError(f"need ≥ 2 periods for overlap, found {len(buckets)}")
    with stage("overlap"):
        result = overlap_stage(cfg, buckets)
    return f"{result['metric']} overlap: " + ", ".join(f"{p:.1f}" for p in result["percents"])


def cmd_daily_counts(cfg: PipelineConfig, source: str | None = None) -> str:
    statements = read_statements(cfg)
    stats = read_stats(cfg)
    with stage("daily-counts"):
        summaries = daily_stage(cfg, statements, stats, None if source is None else [source])
    shown = [source] if source is not None else sorted(summaries)
    return "; ".join(
        f"{s}: {summaries[s]['days']} days, {summaries[s]['total']} events, median {summaries[s]['median']}"
        for s in shown
    )


# -- full run ---------------------------------------------------------------


@dataclass
class RunManifest:
    config: dict
    corpus_digest: str
    tool_version: str
    counts: dict
    reports: dict

    def to_dict(self) -> dict:
        return {
            "config": self.config,
            "corpus_digest": self.corpus_digest,
            "tool_version": self.tool_version,
            "counts": self.counts,
            "reports": self.reports,
        }


def check_counts(counts: dict, statements) -> None:
    expected_events = sum(len(s.entities) * (len(s.entities) - 1) // 2 for s in statements)
    if counts["statements"] > counts["sentences"]:
        raise InvariantError("more statements than sentences")
    if counts["events"] != expected_events:
        raise InvariantError(f"event count {counts['events']} != sum of C(n,2) = {expected_events}")
    if counts["simple_edges"] > counts["events"]:
        raise InvariantError("more simple edges than events")


def _row_count(path: Path) -> int:
    text = path.read_text(encoding="utf-8")
    if path.suffix == ".json":
        data = json.loads(text)
        return len(data) if isinstance(data, (list, dict)) else 1
    lines = text.splitlines()
    if path.suffix == ".csv":
        return max(len(lines) - 1, 0)
    return len(lines)


def run_pipeline(cfg: PipelineConfig) -> RunManifest:
    """Run every stage and write the report bundle plus ``manifest.json``.

    An ``INCOMPLETE`` marker naming the failed stage is left in the output
    directory when any stage fails.
    """
    cfg.validate(need_corpus=True, need_tagger=True)
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    marker = out / INCOMPLETE
    atomic_write_text(marker, "running\n")
    current = "ingest"
    try:
        with stage("ingest"):
            corpus, stats = ingest(cfg)
        current = "extract"
        with stage("extract"):
            extraction = extract(cfg, corpus)
        statements = extraction.statements
        current = "network"
        with stage("network"):
            network = network_stage(cfg, statements)
        current = "cores"
        with stage("cores"):
            cores = cores_stage(cfg, network)
        current = "trajectories"
        with stage("trajectories"):
            trajectories = trajectories_stage(cfg, statements, stats.span)
        current = "buckets"
        with stage("buckets"):
            buckets = buckets_stage(cfg, statements, stats.span)
        current = "overlap"
        with stage("overlap"):
            if len(buckets) >= 2:
                overlap = overlap_stage(cfg, buckets)
            else:
                write_csv(out / OVERLAP, ["period_pair", "percent", "both_empty"], [])
                overlap = {"metric": cfg.overlap_metric, "percents": [], "note": "need >= 2 periods"}
        current = "daily-counts"
        with stage("daily-counts"):
            daily = daily_stage(cfg, statements, stats)

        current = "manifest"
        with stage("manifest"):
            counts = {
                "articles": len(corpus),
                "skipped_lines": len(corpus.skipped),
                "sentences": extraction.sentences,
                "statements": len(statements),
                "events": len(network.events),
                "nodes": len(network.nodes),
                "simple_edges": len(network.simple_edges),
            }
            check_counts(counts, statements)
            daily_total = sum(s["total"] for s in daily.values())
            if daily_total != counts["events"]:
                raise InvariantError(f"daily counts sum {daily_total} != events {counts['events']}")

            write_json(
                out / SUMMARY,
                {
                    "corpus": stats.to_dict(),
                    "counts": counts,
                    "cores": cores,
                    "trajectories": trajectories,
                    "buckets": [
                        {"period": b.period.label, "partial": b.period.partial, "size": len(b.members)}
                        for b in buckets
                    ],
                    "overlap": overlap,
                    "daily": daily,
                },
            )
            reports = {}
            for path in sorted(p for p in out.rglob("*") if p.is_file()):
                rel = path.relative_to(out).as_posix()
                if rel in (MANIFEST, INCOMPLETE) or path.name.startswith("."):
                    continue
                rows = _row_count(path)
                reports[rel] = {"sha256": file_digest(path), "rows": rows, "empty_by_data": rows == 0}
            manifest = RunManifest(
                config=cfg.snapshot(),
                corpus_digest=file_digest(cfg.corpus),
                tool_version=__version__,
                counts=counts,
                reports=reports,
            )
            write_json(out / MANIFEST, manifest.to_dict())
    except StatementNetError as exc:
        atomic_write_text(marker, f"failed in stage {getattr(exc, 'stage', current)}: {exc}\n")
        raise
    marker.unlink()
    return manifest


def cmd_run(cfg: PipelineConfig) -> str:
    manifest = run_pipeline(cfg)
    c = manifest.counts
    return (
        f"{c['articles']} articles, {c['statements']} statements, {c['events']} events, "
        f"{c['nodes']} nodes, {c['simple_edges']} edges -> {cfg.output_dir / MANIFEST}"
    )

