"""Fixture builders shared by unit and acceptance tests."""

from __future__ import annotations

import csv
from datetime import date
from itertools import combinations

from statement_net.corpus import NewsArticle
from statement_net.statements import SpeechLexicon, StatementSentence, extract_statements
from statement_net.tagging import Gazetteer, load_merge_rules

from conftest import FIXTURES


def load_filter_rows():
    with open(FIXTURES / "statement_filter.tsv", encoding="utf-8", newline="") as handle:
        lines = [line for line in handle if not line.startswith("#")]
    rows = []
    for rid, kind, default, both, entities, sentence in csv.reader(lines, delimiter="\t", quoting=csv.QUOTE_NONE):
        rows.append(
            {
                "id": int(rid),
                "kind": kind,
                "default": None if default == "-" else default,
                "require_both": None if both == "-" else both,
                "entities": () if entities == "-" else tuple(entities.split("|")),
                "sentence": sentence,
            }
        )
    return rows


def run_filter_fixture(require_both: bool):
    """Extract each fixture sentence as its own article; map row id -> (trigger, entities) or None."""
    tagger = Gazetteer.from_file(FIXTURES / "filter_gazetteer.txt")
    rules = load_merge_rules(FIXTURES / "filter_merge_rules.tsv")
    lexicon = SpeechLexicon.default(require_both=require_both)
    got = {}
    for row in load_filter_rows():
        article = NewsArticle(f"f{row['id']:02d}", "Fixture", date(2020, 1, 1), "", row["sentence"])
        statements = extract_statements(article, tagger, lexicon, rules)
        assert len(statements) <= 1
        got[row["id"]] = (statements[0].trigger, statements[0].entities) if statements else None
    return got


def expected_filter(require_both: bool):
    key = "require_both" if require_both else "default"
    return {r["id"]: (r[key], r["entities"]) if r[key] else None for r in load_filter_rows()}


def statement(entities, day: date, article_id="a", index=0, source="S"):
    return StatementSentence(article_id, index, " ".join(entities), tuple(entities), "said", source, day)


def clique_statements(members, day: date, source="S", article_id="clique"):
    """One statement naming every member: a clique in a single sentence."""
    return [statement(list(members), day, article_id=article_id, source=source)]


def pair_statements(pairs, day: date, source="S", prefix="p"):
    return [statement(list(p), day, article_id=f"{prefix}{i}", source=source) for i, p in enumerate(pairs)]


def all_pairs(members):
    return list(combinations(members, 2))
