import json
import re

import pytest
from hypothesis import given, strategies as st

from statement_net.text import TokenizedSentence, segment_sentences, tokenize

from conftest import FIXTURES

CASES = json.loads((FIXTURES / "segmentation.json").read_text(encoding="utf-8"))


@pytest.mark.parametrize("case", CASES, ids=[c["body"][:30] for c in CASES])
def test_hand_segmented_fixture(case):
    assert [s.text for s in segment_sentences(case["body"])] == case["sentences"]


def test_abbreviation_is_not_a_split_point():
    sentences = segment_sentences("Dr. Rahman said it. He left.")
    assert len(sentences) == 2
    assert sentences[0].tokens[0] == "Dr."


def test_empty_and_unterminated():
    assert segment_sentences("") == []
    assert segment_sentences("   \n ") == []
    assert [s.text for s in segment_sentences("No terminator here")] == ["No terminator here"]


def test_start_index_and_offsets():
    sentences = segment_sentences("A b. C d.", start_index=3)
    assert [s.index for s in sentences] == [3, 4]
    for s in sentences:
        assert [s.text[a:b] for a, b in s.offsets] == list(s.tokens)


@pytest.mark.parametrize(
    "text, tokens",
    [
        ("Hasina's plan", ["Hasina", "'s", "plan"]),
        ("don't stop", ["don't", "stop"]),
        ("the leaders' meeting", ["the", "leaders", "'", "meeting"]),
        ("1,200 taka at 3.5%", ["1,200", "taka", "at", "3.5", "%"]),
        ("pro-government U.S. envoy", ["pro-government", "U.S.", "envoy"]),
        ("“Quote,” he said.", ["“", "Quote", ",", "”", "he", "said", "."]),
    ],
)
def test_tokenize(text, tokens):
    assert tokenize(text) == tokens


def test_from_tokens_roundtrip():
    s = TokenizedSentence.from_tokens(0, ["Barack", "Obama", "said"], ["PER", "PER", "O"])
    assert s.text == "Barack Obama said"
    assert [s.text[a:b] for a, b in s.offsets] == ["Barack", "Obama", "said"]


_alphabet = st.sampled_from(list("abc XYZ.,!?\"'\n-") + ["Dr.", "U.S.", "Mr. ", "3.5", "’s", "…"])


@given(st.lists(_alphabet, max_size=40).map("".join))
def test_sentences_reconstruct_body(body):
    sentences = segment_sentences(body)
    squash = lambda t: re.sub(r"\s+", "", t)
    assert squash("".join(s.text for s in sentences)) == squash(body)
    for s in sentences:
        assert s.tokens
        assert [s.text[a:b] for a, b in s.offsets] == list(s.tokens)
