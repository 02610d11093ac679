"""Loading and indexing line-delimited news corpora.

Each line of a corpus file is one JSON object::

    {"article_id": "ds-0001", "source": "Daily Star", "published": "2008-01-03",
     "headline": "...", "body": "...", "category": "politics"}

``category`` is optional. A time-of-day suffix on ``published`` is accepted and
discarded.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Iterator, Literal

from .errors import CorpusError

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("article_id", "source", "published", "headline", "body")


@dataclass(frozen=True)
class NewsArticle:
    article_id: str
    source: str
    published: date
    headline: str
    body: str
    category: str | None = None

    def to_record(self) -> dict:
        record = {
            "article_id": self.article_id,
            "source": self.source,
            "published": self.published.isoformat(),
            "headline": self.headline,
            "body": self.body,
        }
        if self.category is not None:
            record["category"] = self.category
        return record


@dataclass(frozen=True)
class IngestOptions:
    on_error: Literal["fail", "skip"] = "fail"


@dataclass(frozen=True)
class Corpus:
    articles: tuple[NewsArticle, ...] = ()
    skipped: tuple[tuple[int, str], ...] = field(default=(), compare=False)

    @classmethod
    def from_articles(cls, articles, skipped=()) -> "Corpus":
        seen: set[str] = set()
        for article in articles:
            if article.article_id in seen:
                raise CorpusError(f"duplicate article_id {article.article_id!r}")
            seen.add(article.article_id)
        ordered = sorted(articles, key=lambda a: (a.published, a.article_id))
        return cls(tuple(ordered), tuple(skipped))

    def __iter__(self) -> Iterator[NewsArticle]:
        return iter(self.articles)

    def __len__(self) -> int:
        return len(self.articles)

    @property
    def sources(self) -> frozenset[str]:
        return frozenset(a.source for a in self.articles)

    @property
    def date_ranges(self) -> dict[str, tuple[date, date]]:
        ranges: dict[str, tuple[date, date]] = {}
        for a in self.articles:
            lo, hi = ranges.get(a.source, (a.published, a.published))
            ranges[a.source] = (min(lo, a.published), max(hi, a.published))
        return dict(sorted(ranges.items()))

    @property
    def span(self) -> tuple[date, date] | None:
        if not self.articles:
            return None
        # articles are sorted by date
        return self.articles[0].published, self.articles[-1].published

    def by_source(self, source: str) -> list[NewsArticle]:
        return [a for a in self.articles if a.source == source]

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps(a.to_record(), ensure_ascii=False, sort_keys=True) + "\n"
            for a in self.articles
        )


def parse_date(value) -> date:
    if not isinstance(value, str):
        raise ValueError(f"published must be a string, got {type(value).__name__}")
    text = value.strip()
    if len(text) > 10 and text[10] in "T ":
        text = text[:10]
    return date.fromisoformat(text)


def parse_record(record) -> NewsArticle:
    if not isinstance(record, dict):
        raise ValueError("record is not a JSON object")
    missing = [k for k in REQUIRED_KEYS if k not in record]
    if missing:
        raise ValueError(f"missing required keys: {', '.join(missing)}")
    for key in ("article_id", "source", "headline", "body"):
        if not isinstance(record[key], str):
            raise ValueError(f"{key} must be a string")
    if not record["article_id"].strip():
        raise ValueError("article_id is empty")
    if not record["source"].strip():
        raise ValueError("source is empty")
    if not record["body"].strip():
        raise ValueError("body is empty")
    try:
        published = parse_date(record["published"])
    except ValueError as exc:
        raise ValueError(f"unparseable date {record['published']!r}: {exc}") from None
    category = record.get("category")
    if category is not None and not isinstance(category, str):
        raise ValueError("category must be a string")
    return NewsArticle(
        article_id=record["article_id"],
        source=record["source"],
        published=published,
        headline=record["headline"],
        body=record["body"],
        category=category,
    )


def ingest_corpus(path, options: IngestOptions | None = None) -> Corpus:
    """Read a corpus file into an immutable, deterministically ordered Corpus.

    Malformed lines either abort ingestion (``on_error="fail"``) or are logged and
    skipped (``on_error="skip"``). A duplicate ``article_id`` is always an error.
    """
    options = options or IngestOptions()
    path = Path(path)
    try:
        with path.open("r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except (OSError, UnicodeDecodeError) as exc:
        raise CorpusError(f"cannot read corpus: {exc}", path=str(path)) from exc

    articles: list[NewsArticle] = []
    skipped: list[tuple[int, str]] = []
    seen: dict[str, int] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            article = parse_record(json.loads(line))
        except ValueError as exc:  # JSONDecodeError is a ValueError
            if options.on_error == "fail":
                raise CorpusError(f"malformed record: {exc}", line=lineno, path=str(path)) from None
            logger.warning("%s:%d: skipping malformed record: %s", path, lineno, exc)
            skipped.append((lineno, str(exc)))
            continue
        if article.article_id in seen:
            raise CorpusError(
                f"duplicate article_id {article.article_id!r} (first seen on line {seen[article.article_id]})",
                line=lineno,
                path=str(path),
            )
        seen[article.article_id] = lineno
        articles.append(article)
    return Corpus.from_articles(articles, skipped)


def months_spanned(first: date, last: date) -> int:
    """Distinct calendar months touched by the inclusive range ``[first, last]``."""
    return (last.year - first.year) * 12 + (last.month - first.month) + 1


def elapsed_months(first: date, last: date) -> int:
    """Whole months elapsed from ``first`` to ``last``.

    2008-01-01..2017-12-01 gives 119; an incomplete trailing month is not counted.
    """
    months = (last.year - first.year) * 12 + (last.month - first.month)
    if last.day < first.day:
        months -= 1
    return max(months, 0)


@dataclass(frozen=True)
class SourceStats:
    source: str
    articles: int
    first: date
    last: date
    months_spanned: int
    elapsed_months: int
    days_spanned: int

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "articles": self.articles,
            "first": self.first.isoformat(),
            "last": self.last.isoformat(),
            "months_spanned": self.months_spanned,
            "elapsed_months": self.elapsed_months,
            "days_spanned": self.days_spanned,
        }


@dataclass(frozen=True)
class CorpusStats:
    total_articles: int
    sources: tuple[SourceStats, ...]
    skipped_lines: int = 0

    @property
    def span(self) -> tuple[date, date] | None:
        if not self.sources:
            return None
        return min(s.first for s in self.sources), max(s.last for s in self.sources)

    def date_ranges(self) -> dict[str, tuple[date, date]]:
        return {s.source: (s.first, s.last) for s in self.sources}

    def to_dict(self) -> dict:
        span = self.span
        return {
            "total_articles": self.total_articles,
            "skipped_lines": self.skipped_lines,
            "span": None if span is None else [span[0].isoformat(), span[1].isoformat()],
            "sources": [s.to_dict() for s in self.sources],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "CorpusStats":
        sources = tuple(
            SourceStats(
                source=s["source"],
                articles=s["articles"],
                first=date.fromisoformat(s["first"]),
                last=date.fromisoformat(s["last"]),
                months_spanned=s["months_spanned"],
                elapsed_months=s["elapsed_months"],
                days_spanned=s["days_spanned"],
            )
            for s in data["sources"]
        )
        return cls(data["total_articles"], sources, data.get("skipped_lines", 0))


def corpus_stats(corpus: Corpus) -> CorpusStats:
    counts: dict[str, int] = {}
    for a in corpus:
        counts[a.source] = counts.get(a.source, 0) + 1
    sources = []
    for source, (first, last) in corpus.date_ranges.items():
        sources.append(
            SourceStats(
                source=source,
                articles=counts[source],
                first=first,
                last=last,
                months_spanned=months_spanned(first, last),
                elapsed_months=elapsed_months(first, last),
                days_spanned=(last - first).days + 1,
            )
        )
    return CorpusStats(len(corpus), tuple(sources), len(corpus.skipped))
