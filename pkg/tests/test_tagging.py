import itertools
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import central_difference, enumerate_spans, focal_value_mp, rel_err
from refmail.adapter import AdapterProtocolError, AdapterTimeout, JsonLinesClient
from refmail.ingest import ParsedEmail, TokenSequence, flatten_to_tokens
from refmail.tagging import (
    ACTION,
    IDENTITY,
    TAGS,
    BaselineTagger,
    EntitySpan,
    LabeledSample,
    ModelTagger,
    augment_identity_mutations,
    baseline_tag,
    decode_spans,
    dump_corpus,
    focal_loss,
    focal_loss_grad,
    load_corpus,
    model_tag,
    spans_to_tags,
)
from refmail.tagging.focal import clamp_probs
from refmail.tagging.baseline import load_gazetteer

ADAPTER = Path(__file__).parent / "fixtures" / "adapters" / "tagger.py"


def _spans(tags):
    return sorted((s.start, s.end, s.cls) for s in decode_spans(tags))


# -- decode ---------------------------------------------------------------------


def test_decode_basic():
    spans = decode_spans(["BE-ID", "IE-ID", "O"], ["IEEE", "S&P", "invites"])
    assert spans == [EntitySpan(0, 1, IDENTITY, "IEEE S&P")]


def test_decode_all_outside():
    assert decode_spans(["O"] * 5) == []


def test_decode_orphan_inside_opens_span():
    assert _spans(["IE-ACT", "IE-ACT", "O", "IE-ID"]) == [(0, 1, ACTION), (3, 3, IDENTITY)]


def test_decode_class_switch_repairs():
    assert _spans(["BE-ID", "IE-ACT", "IE-ACT"]) == [(0, 0, IDENTITY), (1, 2, ACTION)]


def test_decode_uses_original_separators():
    seq = flatten_to_tokens(ParsedEmail.from_fields(body="Please complete  the form, thanks"))
    tags = ["O"] * len(seq)
    tags[2:5] = ["BE-ACT", "IE-ACT", "IE-ACT"]
    assert decode_spans(tags, seq)[0].text == "complete  the form"


def test_decode_length_mismatch():
    with pytest.raises(ValueError):
        decode_spans(["O"], ["a", "b"])


def test_decode_matches_oracle_on_random_sequences():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        n = int(rng.integers(0, 20))
        tags = [TAGS[i] for i in rng.integers(0, 5, n)]
        assert _spans(tags) == enumerate_spans(tags)


def test_decode_exhaustive_small():
    # lengths up to 5 here; the full length-8 sweep lives in the acceptance suite
    for n in range(6):
        for tags in itertools.product(TAGS, repeat=n):
            assert _spans(tags) == enumerate_spans(tags)


@settings(max_examples=300)
@given(st.lists(st.sampled_from(TAGS), max_size=30))
def test_decode_spans_sorted_and_disjoint(tags):
    spans = decode_spans(tags)
    for a, b in zip(spans, spans[1:]):
        assert a.end < b.start
    assert decode_spans(spans_to_tags(spans, len(tags))) == spans


# -- baseline tagger ------------------------------------------------------------


@pytest.fixture(scope="module")
def tagger():
    return BaselineTagger(["IEEE S&P", "PayPal", "IT Helpdesk", "Microsoft"]).fit()


def _found(tagger, **fields):
    seq = flatten_to_tokens(ParsedEmail.from_fields(**fields))
    return [(s.cls, s.text) for s in tagger.find_spans(seq)]


def test_baseline_action_pattern(tagger):
    found = _found(tagger, body="Dear all, click here to complete the form by Friday.")
    assert (ACTION, "complete the form") in found


def test_baseline_identity_longest_match(tagger):
    found = _found(tagger, sender_name="IEEE S&P 2026 Program Committee")
    assert found == [(IDENTITY, "IEEE S&P")]


def test_baseline_trivial_email(tagger):
    assert _found(tagger, body="Hi, are you available?") == []


def test_baseline_url_object(tagger):
    found = _found(tagger, body="Please visit https://example.invalid/login today")
    assert (ACTION, "visit https://example.invalid/login") in found


def test_baseline_typo_tolerance(tagger):
    found = _found(tagger, sender_name="PayPaal Support")
    assert found == [(IDENTITY, "PayPaal")]


def test_baseline_tag_function_matches_estimator(tagger):
    seq = flatten_to_tokens(ParsedEmail.from_fields(sender_name="PayPal", body="Verify your account now."))
    assert baseline_tag(seq, tagger.gazetteer) == tagger.tag(seq)


def test_gazetteer_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text("# brands\nPayPal\n\nIEEE S&P\n", encoding="utf-8")
    assert load_gazetteer(p) == ["PayPal", "IEEE S&P"]


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from(
    ["PayPal", "IEEE", "S&P", "click", "the", "link", "verify", "account", "Microsoft", ".", "now", "form",
     "complete", "IT", "Helpdesk", "password", "update"]), max_size=25))
def test_baseline_spans_never_overlap_within_class(tagger, words):
    spans = tagger.find_spans(TokenSequence.from_texts(words))
    for cls in (IDENTITY, ACTION):
        own = sorted(s for s in spans if s.cls == cls)
        for a, b in zip(own, own[1:]):
            assert a.end < b.start


# -- model adapter --------------------------------------------------------------


class FakeAdapter:
    def __init__(self, reply=None, exc=None):
        self.reply, self.exc = reply, exc

    def request(self, payload, deadline=None):
        if self.exc:
            raise self.exc
        return self.reply(payload) if callable(self.reply) else self.reply


def _seq():
    return flatten_to_tokens(ParsedEmail.from_fields(sender_name="PayPal", body="Verify your account now."))


def test_model_tag_echoing_baseline(tagger):
    seq = _seq()
    adapter = FakeAdapter(lambda p: {"tags": baseline_tag(p["tokens"], tagger.gazetteer)})
    tags, diags = model_tag(seq, adapter, tagger)
    assert tags == tagger.tag(seq) and diags == []
    assert ModelTagger(adapter, tagger).find_spans(seq) == tagger.find_spans(seq)


@pytest.mark.parametrize("adapter", [
    FakeAdapter(exc=AdapterTimeout("slow")),
    FakeAdapter({"tags": ["O"]}),
    FakeAdapter({"tags": "nope"}),
    FakeAdapter(lambda p: {"tags": ["B-XX"] * len(p["tokens"])}),
])
def test_model_tag_failures_fall_back(tagger, adapter):
    seq = _seq()
    tags, diags = model_tag(seq, adapter, tagger)
    assert tags == tagger.tag(seq)
    assert len(diags) == 1 and "fallback" in diags[0]
    spans, d2 = ModelTagger(adapter, tagger).find_spans_with_diagnostics(seq)
    assert spans == tagger.find_spans(seq) and d2


def test_subprocess_adapter_roundtrip(tagger):
    seq = _seq()
    with JsonLinesClient.spawn([sys.executable, str(ADAPTER), "all_o"], deadline=5) as client:
        tags, diags = model_tag(seq, client, tagger)
    assert tags == ["O"] * len(seq) and diags == []


def test_subprocess_adapter_wrong_length(tagger):
    with JsonLinesClient.spawn([sys.executable, str(ADAPTER), "short"], deadline=5) as client:
        tags, diags = model_tag(_seq(), client, tagger)
        with pytest.raises(AdapterProtocolError):
            from refmail.tagging.model import _validate
            _validate(client.request({"tokens": ["a", "b"]}), 2)
    assert tags == tagger.tag(_seq())
    assert "protocol error" in diags[0]


def test_subprocess_adapter_deadline(tagger):
    with JsonLinesClient.spawn([sys.executable, str(ADAPTER), "sleep"]) as client:
        t0 = time.perf_counter()
        tags, diags = model_tag(_seq(), client, tagger, deadline=0.2)
        assert time.perf_counter() - t0 < 2
    assert tags == tagger.tag(_seq())
    assert "adapter failure" in diags[0]


# -- focal loss -----------------------------------------------------------------


def _rows(rng, n, k=5):
    logits = rng.normal(size=(n, k))
    p = np.exp(logits)
    return p / p.sum(1, keepdims=True), rng.integers(0, k, n)


def test_focal_gamma_zero_is_cross_entropy():
    probs, labels = _rows(np.random.default_rng(0), 50)
    ce = -np.mean(np.log(probs[np.arange(50), labels]))
    assert abs(focal_loss(probs, labels, 0.0) - ce) < 1e-12


def test_focal_perfect_predictions():
    probs = np.eye(4)
    for g in (0.0, 0.5, 2.0, 5.0):
        assert focal_loss(probs, [0, 1, 2, 3], g) == 0.0


def test_focal_reference_value():
    probs = np.array([[0.5, 0.5], [0.75, 0.25]])
    expected = focal_value_mp([0.5, 0.25], 2)
    hand = -0.5 * (0.5 ** 2 * math.log(0.5) + 0.75 ** 2 * math.log(0.25))
    assert abs(focal_loss(probs, [0, 1], 2.0) - float(expected)) < 1e-15
    assert abs(float(expected) - hand) < 1e-15


def test_focal_rejects_zero_probability():
    with pytest.raises(ValueError):
        focal_loss(np.array([[1.0, 0.0]]), [1])
    assert np.isfinite(focal_loss(clamp_probs([[1.0, 0.0]]), [1]))


def test_focal_grad_gamma_zero():
    probs, labels = _rows(np.random.default_rng(1), 7)
    g = focal_loss_grad(probs, labels, 0.0)
    expected = np.zeros_like(probs)
    expected[np.arange(7), labels] = -1.0 / (7 * probs[np.arange(7), labels])
    np.testing.assert_allclose(g, expected, rtol=1e-12)


def test_focal_grad_zero_at_certain_row():
    probs = np.array([[1.0, 0.0, 0.0], [0.2, 0.3, 0.5]])
    g = focal_loss_grad(probs, [0, 2], 2.0)
    assert np.all(g[0] == 0)


@pytest.mark.parametrize("gamma", [0.0, 0.5, 1.0, 2.0, 3.5])
def test_focal_grad_matches_finite_differences(gamma):
    probs, labels = _rows(np.random.default_rng(int(gamma * 10)), 12)
    g = focal_loss_grad(probs, labels, gamma)
    fd = central_difference(lambda x: focal_loss(x, labels, gamma), probs)
    assert rel_err(g, fd) < 1e-5


@settings(max_examples=200)
@given(st.floats(0.01, 0.99), st.floats(0.0, 1.0), st.floats(0.0, 5.0))
def test_focal_monotone_in_gold_probability(p, frac, gamma):
    hi = p + (1 - p) * frac
    lo_loss = focal_loss(np.array([[p, 1 - p]]), [0], gamma)
    hi_loss = focal_loss(np.array([[hi, 1 - hi]]) if hi < 1 else np.array([[1.0, 0.0]]), [0], gamma)
    assert hi_loss <= lo_loss + 1e-15


# -- augmentation / corpus -------------------------------------------------------


def _sample():
    tokens = ["[FROM]", "PayPal", "[BODY]", "Please", "visit", "the", "link", "."]
    tags = ["O", "BE-ID", "O", "O", "BE-ACT", "IE-ACT", "IE-ACT", "O"]
    return LabeledSample(tokens, tags)


def test_augment_preserves_layout():
    out = augment_identity_mutations([_sample()], rng_seed=3, action_prob=0.0)[0]
    assert out.tags == _sample().tags
    assert out.tokens[1] != "PayPal"
    assert out.tokens[1][0] == "P" and out.tokens[1][-1] == "l"
    assert abs(len(out.tokens[1]) - 6) <= 1


def test_augment_deterministic(tmp_path):
    samples = [_sample()] * 50
    a = augment_identity_mutations(samples, rng_seed=11)
    b = augment_identity_mutations(samples, rng_seed=11)
    dump_corpus(a, tmp_path / "a.jsonl")
    dump_corpus(b, tmp_path / "b.jsonl")
    assert (tmp_path / "a.jsonl").read_bytes() == (tmp_path / "b.jsonl").read_bytes()
    assert load_corpus(tmp_path / "a.jsonl") == a


def test_augment_action_rate():
    report = {}
    out = augment_identity_mutations([_sample()] * 10_000, rng_seed=0, report=report)
    assert abs(report["action_drawn"] / 10_000 - 0.5) <= 0.02
    assert report["action_swapped"] == report["action_drawn"]
    assert sum(o.tokens[4] != "visit" for o in out) == report["action_swapped"]


def test_corpus_errors_carry_line_number(tmp_path):
    p = tmp_path / "c.jsonl"
    p.write_text(_sample().to_json() + "\n" + json.dumps({"tokens": ["a"], "tags": []}) + "\n")
    with pytest.raises(ValueError, match=":2:"):
        load_corpus(p)
