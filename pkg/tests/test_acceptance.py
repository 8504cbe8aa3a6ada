"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines; any
assertion failure marks the criterion red.
"""

import hashlib
import random
import sys
import time

import numpy as np
import pytest

from codemix_adv import (
    AttackConfig,
    InProcessOracle,
    LabeledExample,
    MosAnnotation,
    OracleProtocolError,
    OracleTransportError,
    PerturbationTechnique,
    aggregate_mos,
    apply_technique,
    attack_sentence,
    attack_success_rate,
    build_report,
    cmi,
    emit_report,
    load_report,
    macro_f1,
    open_external,
    rank_tokens,
    tag_tokens,
    tokenize,
    train_baseline,
)
from codemix_adv.corpus import TokenizedSentence
from codemix_adv.langid import LanguageTag
from codemix_adv.metrics import dataset_vocabulary

from oracles import ScriptedOracle
from test_importance import brute_force_order

STUB = [sys.executable, "-m", "codemix_adv.stub_adapter"]


def passed(number, name):
    print(f"\nACCEPTANCE {number:02d} {name}: PASS")


def f1_after(results, num_classes):
    return macro_f1([r.predicted_label for r in results], [r.original_label for r in results], num_classes)


def test_criterion_01_desk_scale_attack_efficacy(desk):
    assert len(desk.train.examples) >= 300
    assert len(desk.test.examples) >= 100
    assert desk.train.num_classes == 3
    assert desk.f1_before >= 0.80
    drop = desk.f1_before - f1_after(desk.runs[4], desk.test.num_classes)
    assert drop >= 0.25
    assert desk.total_seconds <= 120.0
    passed(1, "desk-scale attack efficacy")


def test_criterion_02_monotonicity(desk):
    sr = {k: attack_success_rate(results, "correct") for k, results in desk.runs.items()}
    assert sr[2] <= sr[4] <= sr[8]
    f1 = {k: f1_after(results, desk.test.num_classes) for k, results in desk.runs.items()}
    assert f1[2] >= f1[4] >= f1[8]
    passed(2, "success rate and F1 monotone in k")


def test_criterion_03_importance_matches_brute_force(desk):
    oracle = InProcessOracle(desk.model)
    short = [ex for ex in desk.test.examples if len(tokenize(ex.text).tokens) <= 8]
    assert len(short) >= 10
    for ex in short:
        sent = tokenize(ex.text)
        ranked = rank_tokens(sent, oracle, ex.label, k=len(sent.tokens))
        order, scores = brute_force_order(sent, InProcessOracle(desk.model), ex.label)
        assert list(ranked.indices) == order
        for got, idx in zip(ranked.scores, ranked.indices):
            assert abs(got - scores[idx]) <= 1e-12
    passed(3, f"importance ranking equals brute force on {len(short)} sentences")


def run_scenario(toy_setup, text, label, table, default, k=2):
    dicts, lex = toy_setup
    oracle = ScriptedOracle(2, table=table, default=default)
    result = attack_sentence(
        LabeledExample("scenario", text, label), oracle, dicts, lex, AttackConfig(k=k, seed=0)
    )
    return result, oracle


def test_criterion_04_scripted_scenarios(toy_setup):
    SUB = PerturbationTechnique.SUB_WORD
    REP = PerturbationTechnique.CHAR_REPETITION
    SWITCH = PerturbationTechnique.SWITCH_WORD

    # 1: the very first perturbation flips the prediction
    result, oracle = run_scenario(
        toy_setup,
        "bhalo din",
        0,
        {"bhalo din": [0.6, 0.4], "valo din": [0.45, 0.55]},
        default=[0.6, 0.4],
    )
    assert result.success and result.predicted_label == 1
    assert result.prob_drop == 0.6 - 0.45
    assert [(s.index, s.technique, s.perturbed, s.flipped) for s in result.steps] == [(0, SUB, "valo", True)]
    assert result.adversarial_text == "valo din"
    assert oracle.calls == 4  # base, two ablations, one flip; nothing after

    # 2: a constant oracle can never flip; best drops of 0 are committed
    result, oracle = run_scenario(toy_setup, "bhalo din", 0, {}, default=[0.9, 0.1])
    assert not result.success and result.predicted_label == 0
    assert result.prob_drop == 0.0
    assert [(s.index, s.technique, s.perturbed) for s in result.steps] == [
        (0, SUB, "valo"),
        (1, SWITCH, "day"),
    ]
    assert oracle.calls == 6

    # 3: the committed replacement is the technique with the largest drop
    result, oracle = run_scenario(
        toy_setup,
        "mon bhalo",
        0,
        {
            "mon bhalo": [0.8, 0.2],
            "[UNK] bhalo": [0.4, 0.6],
            "mon [UNK]": [0.7, 0.3],
            "moon bhalo": [0.55, 0.45],
            "mind bhalo": [0.6, 0.4],
            "moon valo": [0.42, 0.58],
        },
        default=[0.8, 0.2],
    )
    assert [(s.index, s.technique, s.perturbed, s.flipped) for s in result.steps] == [
        (0, REP, "moon", False),
        (1, SUB, "valo", True),
    ]
    assert result.success and result.predicted_label == 1
    assert result.prob_drop == 0.55 - 0.42  # realized drop from the committed state
    assert oracle.calls == 6

    # 4: nothing is perturbable; the attack fails without touching the text
    result, oracle = run_scenario(toy_setup, "xyz qrs", 0, {}, default=[0.7, 0.3])
    assert not result.success and result.steps == ()
    assert result.prob_drop == 0.0
    assert result.adversarial_text == "xyz qrs"
    assert oracle.calls == 3

    # 5: drops can be negative yet still committed (best of a bad lot)
    result, oracle = run_scenario(
        toy_setup,
        "bhalo din",
        0,
        {
            "bhalo din": [0.6, 0.4],
            "[UNK] din": [0.2, 0.8],
            "bhalo [UNK]": [0.6, 0.4],
            "valo din": [0.7, 0.3],
            "bhaloo din": [0.65, 0.35],
            "bhaloo day": [0.58, 0.42],
        },
        default=[0.6, 0.4],
    )
    assert not result.success
    assert [(s.index, s.technique, s.perturbed, s.label_prob_after) for s in result.steps] == [
        (0, REP, "bhaloo", 0.65),
        (1, SWITCH, "day", 0.58),
    ]
    assert result.prob_drop == pytest.approx(0.6 - 0.58, abs=1e-12)
    assert oracle.calls == 6

    # 6: an originally misclassified sentence "flips" on the first try and
    # the oracle sees nothing afterwards
    result, oracle = run_scenario(toy_setup, "mon din", 0, {}, default=[0.3, 0.7])
    assert result.success and result.original_pred == 1
    assert result.prob_drop == 0.0
    assert oracle.calls == 4
    assert oracle.queries[-1] == "moon din"

    passed(4, "six scripted attack traces reproduced exactly")


def test_criterion_05_perturbation_properties(desk, dicts, lexicon):
    vocab = dataset_vocabulary(desk.train, lexicon) + dataset_vocabulary(desk.test, lexicon)
    assert any(tag is LanguageTag.UNIVERSAL for _, tag in vocab)
    trials = 10_000

    for technique in PerturbationTechnique:
        master = random.Random(1234)
        outputs = []
        for _ in range(trials):
            token, tag = master.choice(vocab)
            rng = random.Random(master.random()) if technique is PerturbationTechnique.CHAR_REPETITION else None
            out = apply_technique(token, tag, technique, dicts, rng)
            outputs.append(out)
            if tag is LanguageTag.UNIVERSAL:
                assert out is None
            if out is None:
                continue
            assert out != token
            assert not any(ch.isspace() for ch in out)
            if technique is PerturbationTechnique.CHAR_REPETITION:
                assert len(out) == len(token) + 1
                assert set(out) == set(token)

        # bit-for-bit determinism under the same seed
        master = random.Random(1234)
        replay = []
        for _ in range(trials):
            token, tag = master.choice(vocab)
            rng = random.Random(master.random()) if technique is PerturbationTechnique.CHAR_REPETITION else None
            replay.append(apply_technique(token, tag, technique, dicts, rng))
        assert replay == outputs
    passed(5, f"{trials} randomized trials per technique hold all invariants")


def test_criterion_06_canonical_pair_fidelity(dicts):
    pairs = [
        ("bhalo", PerturbationTechnique.SUB_WORD, "valo"),
        ("gajab", PerturbationTechnique.SUB_WORD, "gazb"),
        ("mafi", PerturbationTechnique.CHAR_REPETITION, "mafii"),
        ("paoa", PerturbationTechnique.CHAR_REPETITION, "paooa"),
        ("bacha", PerturbationTechnique.SWITCH_WORD, "baby"),
        ("byaah", PerturbationTechnique.SWITCH_WORD, "wedding"),
    ]
    for token, technique, expected in pairs:
        assert apply_technique(token, LanguageTag.L1, technique, dicts) == expected
    passed(6, "all six canonical perturbation pairs hold verbatim")


def test_criterion_07_metrics_correctness(tmp_path, desk, dicts, lexicon):
    # macro F1 on three fixed confusion fixtures
    assert macro_f1([0, 1, 2], [0, 1, 2], 3) == 1.0
    assert macro_f1([1, 0], [0, 1], 2) == 0.0
    assert macro_f1([0, 0, 1, 2], [0, 1, 1, 2], 3) == pytest.approx(7 / 9, abs=1e-12)

    # CMI fixtures
    L1, L2 = LanguageTag.L1, LanguageTag.L2
    all_l1 = TokenizedSentence(("a", "b", "c"), (L1, L1, L1))
    assert cmi(all_l1) == 0.0
    mixed = TokenizedSentence(tuple("abcdef"), (L1, L1, L1, L1, L2, L2))
    assert cmi(mixed) == pytest.approx(33.33, abs=0.01)

    # MOS means are exact arithmetic means
    summary = aggregate_mos(
        [MosAnnotation("s", "a", 2, 0), MosAnnotation("s", "b", 2, 4), MosAnnotation("t", "a", 4, 1)]
    )
    assert summary.per_k == {2: 2.0, 4: 1.0} and summary.overall == pytest.approx(5 / 3)

    # report round-trips byte-identically
    report = build_report(
        desk.test, desk.runs[4], lexicon, dicts, AttackConfig(k=4, seed=0), created_at="fixed"
    )
    path = tmp_path / "report.json"
    emit_report(report, path)
    loaded = load_report(path)
    assert loaded == report
    emit_report(loaded, tmp_path / "again.json")
    assert (tmp_path / "again.json").read_bytes() == path.read_bytes()
    passed(7, "metrics match hand-computed values; reports round-trip")


def test_criterion_08_black_box_budget(desk):
    for k, results in desk.runs.items():
        for result in results:
            budget = (result.n_tokens + 1) + 3 * min(k, result.n_tokens)
            assert result.oracle_calls <= budget, (k, result.example_id)
    mean_time = sum(r.time_s for r in desk.runs[8]) / len(desk.runs[8])
    assert mean_time <= 0.050
    passed(8, f"oracle budget respected; mean time at k=8 is {mean_time * 1000:.2f} ms")


def test_criterion_09_success_reverification(desk):
    oracle = InProcessOracle(desk.model)
    violations = 0
    checked = 0
    for results in desk.runs.values():
        for result in results:
            if not result.success:
                continue
            checked += 1
            probs = oracle.predict(result.adversarial_text)
            if int(np.argmax(probs)) == result.original_label:
                violations += 1
    assert checked > 0
    assert violations == 0
    passed(9, f"{checked} successes re-verified against a fresh oracle")


def test_criterion_10_wire_protocol():
    # handshake and fixed-vector round trip
    with open_external(STUB + ["--classes", "2", "--probs", "0.7,0.3"], 2, timeout=10.0) as oracle:
        assert oracle.predict("hello").tolist() == [0.7, 0.3]

    # responses arrive in request order with matching ids
    with open_external(STUB + ["--classes", "3", "--mode", "hash"], 3, timeout=10.0) as oracle:
        for i in range(5):
            text = f"query {i}"
            digest = hashlib.sha256(text.encode("utf-8")).digest()
            weights = [1 + digest[j] for j in range(3)]
            expected = [w / sum(weights) for w in weights]
            assert oracle.predict(text).tolist() == pytest.approx(expected, abs=1e-12)

    # wrong class count is rejected at handshake
    with pytest.raises(OracleProtocolError):
        open_external(STUB + ["--classes", "2"], 3, timeout=10.0)

    # malformed JSON is rejected
    with open_external(STUB + ["--classes", "2", "--malformed"], 2, timeout=10.0) as oracle:
        with pytest.raises(OracleProtocolError):
            oracle.predict("x")

    # a silent adapter trips the per-request timeout
    with open_external(STUB + ["--classes", "2", "--delay", "0.5"], 2, timeout=10.0) as oracle:
        oracle.timeout = 0.1
        with pytest.raises(OracleTransportError):
            oracle.predict("x")
    passed(10, "wire protocol handshake/order/rejection/timeout all enforced")
