"""Selection of statement sentences: speech-indicating sentences naming two or more people."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date
from pathlib import Path
from typing import Iterable, Sequence

from .errors import ValidationError
from .tagging import MergeRule, apply_merge_rules
from .text import TokenizedSentence

DEFAULT_LEMMAS = ("said", "asked", "told", "spoke", "speak", "says", "added", "declare", "alleged")

INFLECTIONS = {
    "said": ("say", "says", "said", "saying"),
    "says": ("say", "says", "said", "saying"),
    "asked": ("ask", "asks", "asked", "asking"),
    "told": ("tell", "tells", "told", "telling"),
    "spoke": ("speak", "speaks", "spoke", "spoken", "speaking"),
    "speak": ("speak", "speaks", "spoke", "spoken", "speaking"),
    "added": ("add", "adds", "added", "adding"),
    "declare": ("declare", "declares", "declared", "declaring"),
    "alleged": ("allege", "alleges", "alleged", "alleging"),
}

QUOTE_CHARS = frozenset("\"'“”‘’")
_APOSTROPHES = frozenset("'’")


@dataclass(frozen=True)
class SpeechLexicon:
    """Speech-verb surface forms plus the quotation-mark trigger switches.

    ``quote_rule`` lets a quotation mark alone qualify a sentence.
    ``require_both`` demands a speech verb *and* a quotation mark.
    """

    surface_forms: frozenset[str]
    lemmas: frozenset[str] = field(default_factory=frozenset)
    quote_rule: bool = True
    require_both: bool = False

    def __post_init__(self):
        forms = frozenset(f.casefold() for f in self.surface_forms) | frozenset(l.casefold() for l in self.lemmas)
        object.__setattr__(self, "surface_forms", forms)
        if self.require_both and not self.quote_rule:
            raise ValidationError("require_both needs the quote trigger enabled")

    @classmethod
    def default(cls, quote_rule: bool = True, require_both: bool = False) -> "SpeechLexicon":
        forms = {form for lemma in DEFAULT_LEMMAS for form in INFLECTIONS[lemma]}
        return cls(frozenset(forms), frozenset(DEFAULT_LEMMAS), quote_rule, require_both)

    @classmethod
    def from_file(cls, path, quote_rule: bool = True, require_both: bool = False) -> "SpeechLexicon":
        """One surface form per line; ``#`` starts a comment."""
        path = Path(path)
        try:
            lines = path.read_text(encoding="utf-8").splitlines()
        except OSError as exc:
            raise ValidationError(f"cannot read lexicon {path}: {exc}") from exc
        forms = set()
        for line in lines:
            word = line.split("#", 1)[0].strip()
            if word:
                forms.add(word)
        return cls(frozenset(forms), frozenset(forms), quote_rule, require_both)

    def with_switches(self, quote_rule: bool | None = None, require_both: bool | None = None) -> "SpeechLexicon":
        return replace(
            self,
            quote_rule=self.quote_rule if quote_rule is None else quote_rule,
            require_both=self.require_both if require_both is None else require_both,
        )


def _is_quote(sentence: TokenizedSentence, i: int) -> bool:
    tok = sentence.tokens[i]
    if tok not in QUOTE_CHARS:
        return False
    if tok in _APOSTROPHES and i > 0:
        # plural possessive: "leaders' meeting"
        prev_end = sentence.offsets[i - 1][1]
        glued_left = prev_end == sentence.offsets[i][0]
        glued_right = i + 1 < len(sentence) and sentence.offsets[i + 1][0] == sentence.offsets[i][1]
        if glued_left and not glued_right and sentence.tokens[i - 1][-1:] in ("s", "S"):
            return False
    return True


def detect_statement(sentence: TokenizedSentence, lexicon: SpeechLexicon) -> str | None:
    """Return the first token that marks ``sentence`` as speech, or None."""
    verb = quote = None
    for i, tok in enumerate(sentence.tokens):
        if verb is None and tok.casefold() in lexicon.surface_forms:
            verb = (i, tok)
        if quote is None and lexicon.quote_rule and _is_quote(sentence, i):
            quote = (i, tok)
    if lexicon.require_both:
        if verb is None or quote is None:
            return None
        return min(verb, quote)[1]
    found = [t for t in (verb, quote) if t is not None]
    return min(found)[1] if found else None


@dataclass(frozen=True)
class StatementSentence:
    article_id: str
    sentence_index: int
    text: str
    entities: tuple[str, ...]
    trigger: str
    source: str = ""
    published: date | None = None

    def __post_init__(self):
        if len(set(self.entities)) < 2 or len(set(self.entities)) != len(self.entities):
            raise ValueError(f"statement needs >= 2 distinct entities, got {self.entities!r}")
        if not self.trigger:
            raise ValueError("statement trigger is empty")

    def to_record(self) -> dict:
        return {
            "article_id": self.article_id,
            "source": self.source,
            "published": None if self.published is None else self.published.isoformat(),
            "sentence_index": self.sentence_index,
            "trigger": self.trigger,
            "entities": list(self.entities),
            "text": self.text,
        }

    @classmethod
    def from_record(cls, record: dict) -> "StatementSentence":
        published = record.get("published")
        return cls(
            article_id=record["article_id"],
            sentence_index=int(record["sentence_index"]),
            text=record["text"],
            entities=tuple(record["entities"]),
            trigger=record["trigger"],
            source=record.get("source", ""),
            published=None if published is None else date.fromisoformat(published),
        )


def _distinct(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(dict.fromkeys(names))


def select_statements(
    article,
    sentences: Sequence[TokenizedSentence],
    tagger,
    lexicon: SpeechLexicon,
    rules: Sequence[MergeRule] = (),
) -> list[StatementSentence]:
    out = []
    for sentence in sentences:
        trigger = detect_statement(sentence, lexicon)
        if trigger is None:
            continue
        mentions = apply_merge_rules(tagger.tag(sentence), rules)
        entities = _distinct(m.canonical for m in mentions)
        if len(entities) < 2:
            continue
        out.append(
            StatementSentence(
                article_id=article.article_id,
                sentence_index=sentence.index,
                text=sentence.text,
                entities=entities,
                trigger=trigger,
                source=article.source,
                published=article.published,
            )
        )
    return out


def extract_statements(
    article,
    tagger,
    lexicon: SpeechLexicon | None = None,
    rules: Sequence[MergeRule] = (),
    include_headline: bool = False,
) -> list[StatementSentence]:
    """Statement sentences of one article, ordered by sentence index."""
    lexicon = lexicon or SpeechLexicon.default()
    sentences = tagger.sentences(article, include_headline=include_headline)
    return select_statements(article, sentences, tagger, lexicon, rules)
