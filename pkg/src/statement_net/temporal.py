"""Temporal analyses over dated statements.

* monthly (or multi-month) snapshot series, cumulative or per-period
* core-rank trajectories and the period in which the final top core forms
* hierarchy buckets (nodes above a core-number threshold) and their overlap
* per-day edge-event counts and their distribution
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from datetime import date, timedelta
from functools import cached_property
from typing import Iterable, Literal, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .graph import CoreDecomposition, StatementNetwork, build_network, k_core_decompose, pairs_from_statement

logger = logging.getLogger(__name__)

Mode = Literal["cumulative", "per-period"]


def _month_index(d: date) -> int:
    return d.year * 12 + d.month - 1


def _month_start(index: int) -> date:
    return date(index // 12, index % 12 + 1, 1)


def _month_end(index: int) -> date:
    return _month_start(index + 1) - timedelta(days=1)


@dataclass(frozen=True)
class Period:
    """A block of calendar months; ``index`` is 1-based from the corpus start."""

    index: int
    start: date
    end: date
    months: int
    partial: bool = False

    @property
    def label(self) -> str:
        if self.months == 1:
            return self.start.strftime("%Y-%m")
        return f"{self.start:%Y-%m}..{self.end:%Y-%m}"

    def __contains__(self, day: date) -> bool:
        return self.start <= day <= self.end


def make_periods(first: date, last: date, months_per_period: int = 1) -> list[Period]:
    """Consecutive periods anchored at the calendar month of ``first``.

    The last period is kept even when ``last`` falls before its final month, and
    is then flagged ``partial``.
    """
    if months_per_period < 1:
        raise ValueError("months_per_period must be positive")
    if last < first:
        raise ValueError("period span ends before it starts")
    lo, hi = _month_index(first), _month_index(last)
    periods = []
    for i, m in enumerate(range(lo, hi + 1, months_per_period), start=1):
        end_month = m + months_per_period - 1
        periods.append(Period(i, _month_start(m), _month_end(end_month), months_per_period, end_month > hi))
    return periods


def _statement_span(statements) -> tuple[date, date]:
    dates = [st.published for st in statements]
    if any(d is None for d in dates):
        raise ValidationError("all statements must carry a publication date")
    return min(dates), max(dates)


@dataclass
class SnapshotSeries:
    months_per_period: int
    mode: Mode
    snapshots: list[tuple[Period, StatementNetwork]] = field(default_factory=list)

    @property
    def periods(self) -> list[Period]:
        return [p for p, _ in self.snapshots]

    @cached_property
    def decompositions(self) -> list[CoreDecomposition]:
        return [k_core_decompose(net) for _, net in self.snapshots]

    def __len__(self) -> int:
        return len(self.snapshots)


def build_snapshot_series(
    statements: Sequence,
    months_per_period: int = 1,
    mode: Mode = "cumulative",
    span: tuple[date, date] | None = None,
) -> SnapshotSeries:
    """One network per period. ``span`` is the corpus date range; it defaults to
    the statements' own range."""
    if mode not in ("cumulative", "per-period"):
        raise ValueError(f"unknown mode {mode!r}")
    series = SnapshotSeries(months_per_period, mode)
    if not statements:
        return series
    first, last = _statement_span(statements)
    if span is not None:
        first, last = min(first, span[0]), max(last, span[1])
    for period in make_periods(first, last, months_per_period):
        lo = first if mode == "cumulative" else period.start
        series.snapshots.append((period, build_network(statements, window=(lo, period.end))))
    return series


@dataclass(frozen=True)
class Trajectory:
    node: str
    values: tuple[tuple[str, int], ...]

    @property
    def ranks(self) -> list[int]:
        return [v for _, v in self.values]


def core_rank_trajectories(series: SnapshotSeries, nodes: Iterable[str]) -> list[Trajectory]:
    """Core number of each node in every snapshot; 0 where the node is absent."""
    if not series.snapshots:
        raise ValueError("snapshot series is empty")
    labels = [p.label for p in series.periods]
    out = []
    for node in sorted(set(nodes)):
        ranks = [d.get(node) for d in series.decompositions]
        out.append(Trajectory(node, tuple(zip(labels, ranks))))
    return out


def _top(decomposition: CoreDecomposition) -> frozenset[str]:
    if not decomposition.core_number:
        return frozenset()
    return decomposition.shells[decomposition.max_core]


def top_core_emergence(series: SnapshotSeries) -> Period:
    """Earliest period whose top core contains the final snapshot's top core.

    When this is the last period the core did not exist before the end of the
    series; callers can detect that with ``period.index == len(series)``.
    """
    if not series.snapshots:
        raise ValueError("snapshot series is empty")
    if series.mode != "cumulative":
        raise ValueError("top-core emergence is defined on cumulative series")
    decomps = series.decompositions
    final = _top(decomps[-1])
    if not final:
        raise ValueError("final snapshot is empty")
    for period, decomposition in zip(series.periods, decomps):
        if final <= _top(decomposition):
            return period
    raise AssertionError("final period must contain its own top core")


@dataclass(frozen=True)
class HierarchyBucket:
    period: Period
    threshold: int
    members: frozenset[str]


def hierarchy_buckets(
    statements: Sequence,
    period_length: int = 6,
    threshold: int = 7,
    span: tuple[date, date] | None = None,
) -> list[HierarchyBucket]:
    """Nodes whose core number strictly exceeds ``threshold`` in each per-period network."""
    if threshold < 0:
        raise ValueError("threshold must be non-negative")
    series = build_snapshot_series(statements, period_length, "per-period", span)
    return [
        HierarchyBucket(period, threshold, frozenset(v for v, k in d.core_number.items() if k > threshold))
        for period, d in zip(series.periods, series.decompositions)
    ]


def overlap_percent(first: frozenset, second: frozenset, metric: str = "jaccard") -> float:
    if metric == "jaccard":
        union = first | second
        return 100.0 * len(first & second) / len(union) if union else 0.0
    if metric == "containment":
        return 100.0 * len(first & second) / len(first) if first else 0.0
    raise ValueError(f"unknown overlap metric {metric!r}")


@dataclass(frozen=True)
class OverlapPoint:
    label: str
    percent: float
    empty: bool  # both buckets empty; percent is 0 by convention


@dataclass(frozen=True)
class OverlapSeries:
    metric: str
    points: tuple[OverlapPoint, ...]

    @property
    def percents(self) -> list[float]:
        return [p.percent for p in self.points]


def overlap_series(buckets: Sequence[HierarchyBucket], metric: str = "jaccard") -> OverlapSeries:
    if len(buckets) < 2:
        raise ValueError("need >= 2 periods to compute overlap")
    points = []
    for prev, cur in zip(buckets, buckets[1:]):
        label = f"{prev.period.label}->{cur.period.label}"
        both_empty = not prev.members and not cur.members
        if both_empty:
            logger.warning("overlap %s: both buckets empty, reporting 0", label)
        points.append(OverlapPoint(label, overlap_percent(prev.members, cur.members, metric), both_empty))
    return OverlapSeries(metric, tuple(points))


@dataclass(frozen=True)
class DailyEdgeCounts:
    source: str
    counts: Mapping[date, int]

    @property
    def total(self) -> int:
        return sum(self.counts.values())


def daily_edge_counts(
    statements: Iterable,
    source: str,
    date_ranges: Mapping[str, tuple[date, date]],
) -> DailyEdgeCounts:
    """Edge events per day for ``source``, zero-filled over the source's date range."""
    if source not in date_ranges:
        raise ValidationError(f"unknown source {source!r}; known: {', '.join(sorted(date_ranges)) or 'none'}")
    first, last = date_ranges[source]
    counts: dict[date, int] = {}
    day = first
    while day <= last:
        counts[day] = 0
        day += timedelta(days=1)
    for st in statements:
        if st.source != source:
            continue
        n = len(pairs_from_statement(st.entities))
        counts[st.published] = counts.get(st.published, 0) + n
    return DailyEdgeCounts(source, dict(sorted(counts.items())))


@dataclass(frozen=True)
class DistributionSummary:
    days: int
    total: int
    min: float
    median: float
    mean: float
    p90: float
    p99: float
    max: float
    histogram: tuple[tuple[int, int], ...]  # (edge count, number of days), ascending

    def to_dict(self) -> dict:
        return {
            "days": self.days,
            "total": self.total,
            "min": self.min,
            "median": self.median,
            "mean": self.mean,
            "p90": self.p90,
            "p99": self.p99,
            "max": self.max,
            "histogram": [list(h) for h in self.histogram],
        }


def distribution_summary(counts: DailyEdgeCounts) -> DistributionSummary:
    """Histogram and quantiles (linear interpolation) of the per-day counts."""
    values = np.array(sorted(counts.counts.values()), dtype=float)
    if values.size == 0:
        return DistributionSummary(0, 0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, ())
    uniq, freq = np.unique(values.astype(int), return_counts=True)
    q = np.percentile(values, [50, 90, 99])
    return DistributionSummary(
        days=int(values.size),
        total=int(values.sum()),
        min=float(values[0]),
        median=float(q[0]),
        mean=float(values.mean()),
        p90=float(q[1]),
        p99=float(q[2]),
        max=float(values[-1]),
        histogram=tuple((int(u), int(f)) for u, f in zip(uniq, freq)),
    )
