"""Person-entity tagging and name canonicalization.

Two tagger backends share one duck-typed interface (``sentences`` and ``tag``):

* :class:`Gazetteer` -- dictionary tagger with longest-match selection over
  sentences produced by :func:`statement_net.text.segment_sentences`.
* :class:`ExternalTags` -- imports the output of any NER system from
  ``<article_id>.tags`` files (``token<TAB>label``, blank line between
  sentences). The file defines both the sentences and the labels.
"""

from __future__ import annotations

import logging
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .errors import TagFileError, ValidationError
from .text import TokenizedSentence, segment_sentences, tokenize

logger = logging.getLogger(__name__)

PERSON_LABELS = frozenset({"PERSON", "PER"})
_WS = re.compile(r"\s+")


def canonicalize(surface: str) -> str:
    """Normalize whitespace and strip edge punctuation; case is preserved.

    >>> canonicalize("  Barack   Obama, ")
    'Barack Obama'
    """
    text = _WS.sub(" ", surface).strip()
    start, end = 0, len(text)
    while start < end and (unicodedata.category(text[start]).startswith("P") or text[start].isspace()):
        start += 1
    while end > start and (unicodedata.category(text[end - 1]).startswith("P") or text[end - 1].isspace()):
        end -= 1
    text = text[start:end]
    if not text:
        raise ValueError(f"name {surface!r} is empty after normalization")
    return text


@dataclass(frozen=True)
class EntityMention:
    surface: str
    canonical: str
    span: tuple[int, int, int]  # (sentence index, start token, end token), end exclusive

    @property
    def sentence_index(self) -> int:
        return self.span[0]

    @property
    def start(self) -> int:
        return self.span[1]

    @property
    def end(self) -> int:
        return self.span[2]


def _surface(sentence: TokenizedSentence, start: int, end: int) -> str:
    return sentence.text[sentence.offsets[start][0] : sentence.offsets[end - 1][1]]


def _article_sentences(article, include_headline: bool) -> list[TokenizedSentence]:
    sentences: list[TokenizedSentence] = []
    if include_headline and article.headline.strip():
        sentences = segment_sentences(article.headline)
    return sentences + segment_sentences(article.body, start_index=len(sentences))


class Gazetteer:
    """Case-insensitive, longest-match dictionary tagger.

    Canonical names keep the casing of the first gazetteer line that produced a
    given case-folded token sequence.
    """

    def __init__(self, names: Iterable[str] = ()):
        self._entries: dict[tuple[str, ...], str] = {}
        self._by_first: dict[str, list[tuple[str, ...]]] = {}
        for name in names:
            self.add(name)

    def add(self, name: str) -> None:
        canonical = canonicalize(name)
        key = tuple(t.casefold() for t in tokenize(canonical))
        if key in self._entries:
            if self._entries[key] != canonical:
                logger.debug("gazetteer: %r folds onto existing entry %r", canonical, self._entries[key])
            return
        self._entries[key] = canonical
        self._by_first.setdefault(key[0], []).append(key)

    @classmethod
    def from_file(cls, path) -> "Gazetteer":
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ValidationError(f"cannot read gazetteer {path}: {exc}") from exc
        names = []
        for lineno, line in enumerate(lines, start=1):
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            try:
                names.append(canonicalize(stripped))
            except ValueError:
                raise TagFileError(f"{path}: line {lineno}: gazetteer entry is empty after normalization") from None
        return cls(names)

    @property
    def entries(self) -> frozenset[str]:
        return frozenset(self._entries.values())

    def __len__(self) -> int:
        return len(self._entries)

    def sentences(self, article, include_headline: bool = False) -> list[TokenizedSentence]:
        return _article_sentences(article, include_headline)

    def tag(self, sentence: TokenizedSentence) -> list[EntityMention]:
        folded = [t.casefold() for t in sentence.tokens]
        candidates: list[tuple[int, int]] = []
        for i, tok in enumerate(folded):
            for key in self._by_first.get(tok, ()):
                if tuple(folded[i : i + len(key)]) == key:
                    candidates.append((i, i + len(key)))
        # longest first, then earliest start
        candidates.sort(key=lambda c: (c[0] - c[1], c[0]))
        taken = [False] * len(folded)
        chosen = []
        for start, end in candidates:
            if any(taken[start:end]):
                continue
            for j in range(start, end):
                taken[j] = True
            chosen.append((start, end))
        chosen.sort()
        return [
            EntityMention(
                surface=_surface(sentence, s, e),
                canonical=self._entries[tuple(folded[s:e])],
                span=(sentence.index, s, e),
            )
            for s, e in chosen
        ]


def _split_label(label: str) -> tuple[str, str]:
    if len(label) > 2 and label[1] == "-" and label[0] in "BIESLU":
        return label[0], label[2:]
    return "", label


def read_tag_file(path) -> list[TokenizedSentence]:
    """Parse one ``token<TAB>label`` file into labelled sentences."""
    path = Path(path)
    sentences: list[TokenizedSentence] = []
    tokens: list[str] = []
    labels: list[str] = []
    with path.open("r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.rstrip("\r\n")
            if not line.strip():
                if tokens:
                    sentences.append(TokenizedSentence.from_tokens(len(sentences), tokens, labels))
                    tokens, labels = [], []
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0].strip() or not parts[1].strip():
                raise TagFileError(f"{path}: line {lineno}: expected 'token<TAB>label', got {line!r}")
            tokens.append(parts[0].strip())
            labels.append(parts[1].strip())
    if tokens:
        sentences.append(TokenizedSentence.from_tokens(len(sentences), tokens, labels))
    return sentences


class ExternalTags:
    """Tagger backed by a directory of per-article ``.tags`` files."""

    def __init__(self, directory, person_labels: Iterable[str] = PERSON_LABELS):
        self.directory = Path(directory)
        self.person_labels = frozenset(person_labels)

    def path_for(self, article_id: str) -> Path:
        return self.directory / f"{article_id}.tags"

    def sentences(self, article, include_headline: bool = False) -> list[TokenizedSentence]:
        path = self.path_for(article.article_id)
        if not path.is_file():
            raise TagFileError(f"no tag file for article {article.article_id!r} (expected {path})")
        return read_tag_file(path)

    def tag(self, sentence: TokenizedSentence) -> list[EntityMention]:
        if sentence.labels is None:
            raise TagFileError(f"sentence {sentence.index} carries no labels; use sentences from the tag file")
        spans: list[list[int]] = []
        prev_person = False
        for i, label in enumerate(sentence.labels):
            prefix, kind = _split_label(label)
            if kind not in self.person_labels:
                prev_person = False
                continue
            if prev_person and prefix not in ("B", "S", "U"):
                spans[-1][1] = i + 1
            else:
                spans.append([i, i + 1])
            prev_person = prefix not in ("E", "L", "S", "U")
        mentions = []
        for s, e in spans:
            surface = _surface(sentence, s, e)
            try:
                canonical = canonicalize(surface)
            except ValueError:
                continue
            mentions.append(EntityMention(surface, canonical, (sentence.index, s, e)))
        return mentions


def tag_entities(sentence: TokenizedSentence, tagger) -> list[EntityMention]:
    return tagger.tag(sentence)


@dataclass(frozen=True)
class MergeRule:
    left: str
    right: str
    merged: str = ""

    def __post_init__(self):
        if not self.merged:
            object.__setattr__(self, "merged", f"{self.left} {self.right}")


def load_merge_rules(path) -> list[MergeRule]:
    """Read ``left<TAB>right[<TAB>merged]`` lines; ``#`` starts a comment line."""
    path = Path(path)
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise ValidationError(f"cannot read merge rules {path}: {exc}") from exc
    rules: list[MergeRule] = []
    seen: dict[tuple[str, str], str] = {}
    for lineno, line in enumerate(lines, start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) not in (2, 3):
            raise TagFileError(f"{path}: line {lineno}: expected 'left<TAB>right[<TAB>merged]'")
        try:
            left, right = canonicalize(parts[0]), canonicalize(parts[1])
            merged = canonicalize(parts[2]) if len(parts) == 3 and parts[2].strip() else ""
        except ValueError as exc:
            raise TagFileError(f"{path}: line {lineno}: {exc}") from None
        rule = MergeRule(left, right, merged)
        if seen.get((left, right), rule.merged) != rule.merged:
            raise TagFileError(f"{path}: line {lineno}: conflicting rule for ({left!r}, {right!r})")
        seen[(left, right)] = rule.merged
        rules.append(rule)
    return rules


def apply_merge_rules(mentions: Sequence[EntityMention], rules: Iterable[MergeRule]) -> list[EntityMention]:
    """Concatenate adjacent name fragments according to ``rules``.

    One left-to-right pass with a stack: after each merge the new mention is
    retried against its left neighbour, so chained rules resolve in the same
    pass and the result is a fixed point (applying again changes nothing).
    """
    table = {(r.left, r.right): r.merged for r in rules}
    if not table:
        return list(mentions)
    out: list[EntityMention] = []
    for mention in mentions:
        out.append(mention)
        while len(out) >= 2:
            left, right = out[-2], out[-1]
            merged = table.get((left.canonical, right.canonical))
            if merged is None or left.sentence_index != right.sentence_index or right.start != left.end:
                break
            out[-2:] = [
                EntityMention(
                    surface=f"{left.surface} {right.surface}",
                    canonical=merged,
                    span=(left.sentence_index, left.start, right.end),
                )
            ]
    return out
