"""Rule-based tokenizer and sentence segmenter for English news text."""

from __future__ import annotations

import re
from dataclasses import dataclass

_TOKEN_RE = re.compile(
    r"""
      \d+(?:[.,:]\d+)+                  # 3.5, 1,200, 10:30
    | (?:[^\W\d_]\.){2,}                # U.S., B.N.P.
    | \w+(?:-\w+)*(?:['’](?!s\b)\w+)*   # words, compounds, contractions
    | ['’]s\b                           # possessive clitic
    | \S                                # any other visible character
    """,
    re.VERBOSE,
)

ABBREVIATIONS = frozenset(
    """
    mr mrs ms dr md prof sr jr st gen lt col maj capt cmdr sgt gov sen rep hon
    rev mt ft no nos vs etc inc ltd co corp dept univ est approx fig tk rs
    jan feb mar apr jun jul aug sep sept oct nov dec
    """.split()
)

TERMINATORS = frozenset(".!?…")
CLOSERS = frozenset("\"'”’»)]")
_PARAGRAPH_BREAK = re.compile(r"\n[ \t\r\f\v]*\n")


@dataclass(frozen=True)
class TokenizedSentence:
    """One sentence: its text, tokens and token character offsets within ``text``.

    ``labels`` is only set for sentences read from an external tag file.
    """

    index: int
    text: str
    tokens: tuple[str, ...]
    offsets: tuple[tuple[int, int], ...]
    labels: tuple[str, ...] | None = None

    def __len__(self) -> int:
        return len(self.tokens)

    @classmethod
    def from_tokens(cls, index: int, tokens, labels=None) -> "TokenizedSentence":
        """Build a sentence whose text is the tokens joined by single spaces."""
        offsets = []
        pos = 0
        for tok in tokens:
            offsets.append((pos, pos + len(tok)))
            pos += len(tok) + 1
        return cls(
            index,
            " ".join(tokens),
            tuple(tokens),
            tuple(offsets),
            None if labels is None else tuple(labels),
        )


def _raw_spans(text: str) -> list[tuple[int, int]]:
    spans = [m.span() for m in _TOKEN_RE.finditer(text)]
    merged: list[tuple[int, int]] = []
    i = 0
    while i < len(spans):
        start, end = spans[i]
        if i + 1 < len(spans) and text[spans[i + 1][0] : spans[i + 1][1]] == "." and spans[i + 1][0] == end:
            word = text[start:end]
            is_initial = len(word) == 1 and word.isupper()
            if word.lower() in ABBREVIATIONS or is_initial:
                merged.append((start, end + 1))
                i += 2
                continue
        merged.append((start, end))
        i += 1
    return merged


def tokenize(text: str) -> list[str]:
    return [text[s:e] for s, e in _raw_spans(text)]


def segment_sentences(body: str, start_index: int = 0) -> list[TokenizedSentence]:
    """Split ``body`` into tokenized sentences.

    Sentences end at ``.``, ``!``, ``?`` or ``…`` (plus any directly attached
    closing quotes or brackets) and at blank lines. Known abbreviations such as
    ``Dr.`` and initialisms such as ``U.S.`` never end a sentence.
    """
    spans = _raw_spans(body)
    if not spans:
        return []

    groups: list[list[tuple[int, int]]] = []
    current: list[tuple[int, int]] = []
    closing = False
    for span in spans:
        tok = body[span[0] : span[1]]
        if current:
            gap = body[current[-1][1] : span[0]]
            if closing and not gap and (tok in TERMINATORS or tok in CLOSERS):
                current.append(span)
                continue
            if closing or _PARAGRAPH_BREAK.search(gap):
                groups.append(current)
                current = []
        closing = False
        current.append(span)
        if tok in TERMINATORS:
            closing = True
    if current:
        groups.append(current)

    sentences = []
    for i, group in enumerate(groups):
        start = group[0][0]
        end = group[-1][1]
        sentences.append(
            TokenizedSentence(
                index=start_index + i,
                text=body[start:end],
                tokens=tuple(body[s:e] for s, e in group),
                offsets=tuple((s - start, e - start) for s, e in group),
            )
        )
    return sentences
