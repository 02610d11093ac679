"""Regenerate the bundled sample corpus.

Twelve months of 2015, two sources, five articles a month. A sparse ring of
background people runs through the whole year; six "elite" people appear for
the first time in April, where three statement sentences connect all fifteen
of their pairs.

Besides the corpus, gazetteer, merge rules and config, this writes
``plan.json``: the statements each article was built to contain. Tests use it
as an independent tally of what the pipeline should find.

    python sample/make_sample.py
"""

from __future__ import annotations

import json
from datetime import date
from itertools import cycle
from pathlib import Path

HERE = Path(__file__).resolve().parent

ELITE = ["Amina Rahman", "Farid Hossain", "Selina Akter", "Tariq Karim", "Nasreen Haque", "Jamal Uddin"]
A, B, C, D, E, F = ELITE
RING = [
    "Rafiq Islam", "Sultana Begum", "Kamal Ahmed", "Rina Das", "Habib Mia", "Lutfa Khatun",
    "Imran Siddiqui", "Mitu Roy", "Zahid Hasan", "Parvin Sultana", "Anwar Chowdhury", "Shirin Ahmed",
    "Bashir Molla", "Dilruba Yasmin", "Omar Faruk", "Nila Sen",
]
R = RING

# statements per month; each tuple is one statement sentence
PLAN = {
    1: [(R[0], R[1]), (R[1], R[2]), (R[2], R[3]), (R[0], R[1])],
    2: [(R[3], R[4]), (R[4], R[5], R[6]), (R[6], R[7])],
    3: [(R[7], R[8]), (R[8], R[9])],
    4: [(A, B, C, D), (C, D, E, F), (A, B, E, F), (R[9], R[10])],
    5: [(R[10], R[11]), (A, B), (C, F)],
    6: [(R[11], R[12]), (R[12], R[13]), (D, E, F)],
    7: [(R[13], R[14]), (R[14], R[15]), (R[0], A)],
    8: [(R[15], R[0]), (A, C, E)],
    9: [(R[5], F), (R[1], R[2])],
    10: [(B, D), (R[8], R[9])],
    11: [(R[3], R[4]), (A, B, C, D, E, F)],
    12: [(R[10], R[11]), (E, F)],
}

SOURCES = [("Morning Ledger", "ml", (3, 12, 21)), ("Evening Courier", "ec", (7, 18))]

STATEMENT_TEMPLATES = [
    "{first} said {rest} had failed to act on the river erosion.",
    "{first} told reporters that {rest} would meet the donors next week.",
    "Speaking at the rally, {first} alleged that {rest} misled the voters.",
    "“We will not step back,” {first} declared, standing beside {rest}.",
    "{first} asked whether {rest} had read the audit report.",
    "Mr. {first} added that {rest} supported the new budget.",
    "\"This is a shameful day,\" {first} told {rest} at the Dhaka meeting.",
]

FILLERS = [
    "The committee met on Tuesday to review the proposal.",
    "Prices of rice rose by 3.5 per cent in the capital.",
    "The session began at 10.30 a.m. and ran until the evening.",
    "Officials from the U.S. embassy were also present.",
    "{one} visited the flood-hit district on Monday.",
    "{one} and {two} attended the ceremony at the national museum.",
    "{one} said the situation was under control.",
    "Dr. {one} inaugurated the new hospital wing.",
]

HEADLINES = ["Leaders trade words over budget", "Flood response under scrutiny", "Parliament session ends"]


def join_names(names) -> str:
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def build():
    slots = []  # (date, source, prefix) in chronological order
    for month in range(1, 13):
        for source, prefix, days in SOURCES:
            for day in days:
                slots.append((date(2015, month, day), source, prefix))
    slots.sort(key=lambda s: (s[0], s[1]))

    templates = cycle(STATEMENT_TEMPLATES)
    fillers = cycle(FILLERS)
    background = cycle(RING)
    headlines = cycle(HEADLINES)

    articles, plan = [], []
    counters = {"ml": 0, "ec": 0}
    for month in range(1, 13):
        month_slots = [s for s in slots if s[0].month == month]
        assigned = {i: [] for i in range(len(month_slots))}
        for i, st in enumerate(PLAN[month]):
            assigned[i % len(month_slots)].append(st)
        for i, (day, source, prefix) in enumerate(month_slots):
            counters[prefix] += 1
            article_id = f"{prefix}-{counters[prefix]:03d}"
            sentences = []
            for st in assigned[i]:
                sentences.append(next(templates).format(first=st[0], rest=join_names(list(st[1:]))))
                sentences.append(next(fillers).format(one=next(background), two=next(background)))
            while len(sentences) < 3:
                sentences.append(next(fillers).format(one=next(background), two=next(background)))
            articles.append(
                {
                    "article_id": article_id,
                    "source": source,
                    "published": day.isoformat(),
                    "headline": next(headlines),
                    "body": " ".join(sentences),
                    "category": "politics",
                }
            )
            plan.append({"article_id": article_id, "sentences": len(sentences), "statements": [list(s) for s in assigned[i]]})
    return articles, plan


def main():
    articles, plan = build()
    with open(HERE / "corpus.jsonl", "w", encoding="utf-8") as handle:
        for a in articles:
            handle.write(json.dumps(a, ensure_ascii=False) + "\n")
    (HERE / "plan.json").write_text(json.dumps(plan, indent=1, ensure_ascii=False) + "\n", encoding="utf-8")

    # "Nasreen Haque" is only known as two fragments, joined by a merge rule
    names = [n for n in ELITE + RING if n != E] + ["Nasreen", "Haque", "Amina"]
    (HERE / "gazetteer.txt").write_text("\n".join(names) + "\n", encoding="utf-8")
    (HERE / "merge_rules.tsv").write_text("Nasreen\tHaque\tNasreen Haque\n", encoding="utf-8")


if __name__ == "__main__":
    main()
