"""Greedy black-box attack loop over importance-ranked tokens.

For each candidate token (most important first) every perturbation
technique is tried against the current adversarial sentence. The first
replacement that flips the predicted class ends the attack; otherwise
the replacement with the largest label-probability drop is committed
and the loop moves to the next candidate. Failures report the
cumulative label-probability drop achieved by the committed
replacements.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from threading import local
from typing import Callable

from .corpus import Dataset, LabeledExample, detokenize, tokenize
from .importance import DEFAULT_UNK, argmax_class, rank_tokens
from .langid import LangLexicon, LanguageTag, tag_tokens
from .perturb import (
    DEFAULT_TECHNIQUE_ORDER,
    PerturbationDicts,
    PerturbationTechnique,
    apply_technique,
)
from .victim import Oracle


@dataclass(frozen=True)
class AttackConfig:
    """Knobs of the attack loop; defaults follow the reference setup."""

    k: int = 4
    technique_order: tuple[PerturbationTechnique, ...] = DEFAULT_TECHNIQUE_ORDER
    epsilon: float | None = None  # reserved minimum-similarity gate, never enforced here
    seed: int = 0
    unk_token: str = DEFAULT_UNK
    repeat_mode: str = "first"
    attack_misclassified: bool = True

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if sorted(self.technique_order) != sorted(PerturbationTechnique):
            raise ValueError("technique_order must be a permutation of the three techniques")
        if self.repeat_mode not in ("first", "random"):
            raise ValueError("repeat_mode must be 'first' or 'random'")


@dataclass(frozen=True)
class PerturbationStep:
    index: int
    technique: PerturbationTechnique
    original: str
    perturbed: str
    label_prob_after: float
    flipped: bool


@dataclass(frozen=True)
class AttackResult:
    example_id: str
    success: bool
    original_label: int
    original_pred: int
    predicted_label: int
    prob_drop: float
    adversarial_text: str
    steps: tuple[PerturbationStep, ...]
    oracle_calls: int
    time_s: float
    n_tokens: int
    skipped: bool = False


@dataclass(frozen=True)
class AttackRunOutcome:
    """attack_dataset output: results in input order plus collected errors."""

    results: tuple[AttackResult, ...]
    errors: tuple[tuple[str, str], ...] = ()


class AttackError(RuntimeError):
    """Oracle failure mid-attack; carries whatever trace was built."""

    def __init__(self, message: str, example_id: str, steps: tuple[PerturbationStep, ...]):
        super().__init__(message)
        self.example_id = example_id
        self.steps = steps


def _sentence_rng(config: AttackConfig, example_id: str) -> random.Random | None:
    if config.repeat_mode != "random":
        return None
    # seeding with the string keeps runs reproducible across processes
    return random.Random(f"{config.seed}:{example_id}")


def attack_sentence(
    ex: LabeledExample,
    oracle: Oracle,
    dicts: PerturbationDicts,
    lexicon: LangLexicon,
    config: AttackConfig,
) -> AttackResult:
    if not 0 <= ex.label < oracle.num_classes:
        raise ValueError(f"label {ex.label} outside oracle's {oracle.num_classes} classes")
    started = time.perf_counter()
    calls_before = oracle.calls
    rng = _sentence_rng(config, ex.id)
    steps: list[PerturbationStep] = []

    sent = tag_tokens(tokenize(ex.text), lexicon)
    tokens = list(sent.tokens)
    n = len(tokens)

    def finish(success, original_pred, predicted, drop, adv_tokens):
        return AttackResult(
            example_id=ex.id,
            success=success,
            original_label=ex.label,
            original_pred=original_pred,
            predicted_label=predicted,
            prob_drop=float(drop),
            adversarial_text=detokenize(adv_tokens),
            steps=tuple(steps),
            oracle_calls=oracle.calls - calls_before,
            time_s=time.perf_counter() - started,
            n_tokens=n,
        )

    try:
        base_probs = oracle.predict(detokenize(tokens))
        original_pred = argmax_class(base_probs)
        if n == 0:
            return finish(False, original_pred, ex.label, 0.0, tokens)

        # n more calls rank every token; universal tokens are dropped
        # before the budget of k candidates is applied
        ranking = rank_tokens(sent, oracle, ex.label, k=n, unk_token=config.unk_token, base_probs=base_probs)
        candidates = [i for i in ranking.indices if sent.tags[i] is not LanguageTag.UNIVERSAL]
        candidates = candidates[: config.k]

        label_prob = float(base_probs[ex.label])
        adv = list(tokens)
        for index in candidates:
            best_drop = -1.0
            best = None  # (perturbed token, probs, technique)
            for technique in config.technique_order:
                perturbed = apply_technique(adv[index], sent.tags[index], technique, dicts, rng)
                if perturbed is None:
                    continue
                trial = adv.copy()
                trial[index] = perturbed
                probs = oracle.predict(detokenize(trial))
                pred = argmax_class(probs)
                prob_after = float(probs[ex.label])
                if pred != ex.label:
                    steps.append(
                        PerturbationStep(index, technique, adv[index], perturbed, prob_after, flipped=True)
                    )
                    # report the realized drop of the flipping replacement
                    return finish(True, original_pred, pred, label_prob - prob_after, trial)
                drop = label_prob - prob_after
                if drop > best_drop:
                    best_drop = drop
                    best = (perturbed, prob_after, technique)
            if best is not None:
                perturbed, prob_after, technique = best
                steps.append(
                    PerturbationStep(index, technique, adv[index], perturbed, prob_after, flipped=False)
                )
                adv[index] = perturbed
                # the committed sentence's vector is already known; reuse it
                label_prob = prob_after
        return finish(False, original_pred, ex.label, float(base_probs[ex.label]) - label_prob, adv)
    except AttackError:
        raise
    except Exception as exc:
        raise AttackError(f"{ex.id}: {exc}", ex.id, tuple(steps)) from exc


def _skipped_result(ex: LabeledExample, original_pred: int, calls: int, elapsed: float, n: int) -> AttackResult:
    return AttackResult(
        example_id=ex.id,
        success=False,
        original_label=ex.label,
        original_pred=original_pred,
        predicted_label=original_pred,
        prob_drop=0.0,
        adversarial_text=detokenize(tokenize(ex.text).tokens),
        steps=(),
        oracle_calls=calls,
        time_s=elapsed,
        n_tokens=n,
        skipped=True,
    )


def _attack_one(ex, oracle, dicts, lexicon, config) -> AttackResult:
    if not config.attack_misclassified:
        started = time.perf_counter()
        before = oracle.calls
        tokens = tokenize(ex.text).tokens
        try:
            probs = oracle.predict(detokenize(tokens))
        except Exception as exc:
            raise AttackError(f"{ex.id}: {exc}", ex.id, ()) from exc
        pred = argmax_class(probs)
        if pred != ex.label:
            return _skipped_result(ex, pred, oracle.calls - before, time.perf_counter() - started, len(tokens))
    return attack_sentence(ex, oracle, dicts, lexicon, config)


def attack_dataset(
    dataset: Dataset,
    oracle: Oracle,
    dicts: PerturbationDicts,
    lexicon: LangLexicon,
    config: AttackConfig,
    fail_fast: bool = False,
    workers: int = 1,
    oracle_factory: Callable[[], Oracle] | None = None,
) -> AttackRunOutcome:
    """Attack every example; results keep input order.

    With ``workers > 1`` each worker thread gets its own oracle handle
    from ``oracle_factory`` (required), so call counters stay accurate
    and external adapters keep one request in flight per process.
    """
    if workers > 1 and oracle_factory is None:
        raise ValueError("workers > 1 requires an oracle_factory providing one handle per worker")

    errors: list[tuple[str, str]] = []
    results: list[AttackResult] = []

    if workers <= 1:
        for ex in dataset.examples:
            try:
                results.append(_attack_one(ex, oracle, dicts, lexicon, config))
            except AttackError as exc:
                if fail_fast:
                    raise
                errors.append((ex.id, str(exc)))
        return AttackRunOutcome(results=tuple(results), errors=tuple(errors))

    handles = local()
    opened = []

    def run(ex: LabeledExample):
        if not hasattr(handles, "oracle"):
            handles.oracle = oracle_factory()
            opened.append(handles.oracle)
        try:
            return _attack_one(ex, handles.oracle, dicts, lexicon, config)
        except AttackError as exc:
            if fail_fast:
                raise
            return (ex.id, str(exc))

    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for item in pool.map(run, dataset.examples):
                if isinstance(item, AttackResult):
                    results.append(item)
                else:
                    errors.append(item)
    finally:
        for handle in opened:
            close = getattr(handle, "close", None)
            if close is not None:
                close()
    return AttackRunOutcome(results=tuple(results), errors=tuple(errors))
