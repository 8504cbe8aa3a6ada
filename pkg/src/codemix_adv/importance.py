"""Token importance scoring by masked-token ablation.

Each token is replaced by a placeholder and the oracle re-queried; the
score combines the label-class probability drop with, when the ablated
argmax moves off the label, the gain of the newly predicted class:

    ablated argmax == label:  score = v[label] - v_ablated[label]
    ablated argmax != label:  score = (v[label] - v_ablated[label])
                                    + (v_ablated[argmax] - v[argmax])

Argmax ties break toward the lowest class index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .corpus import TokenizedSentence, detokenize
from .victim import Oracle

DEFAULT_UNK = "[UNK]"


def argmax_class(probs: np.ndarray) -> int:
    return int(np.argmax(probs))


def _ablate(sent: TokenizedSentence, index: int, unk_token: str) -> str:
    tokens = list(sent.tokens)
    tokens[index] = unk_token
    return detokenize(tokens)


@dataclass(frozen=True)
class ImportanceScore:
    index: int
    score: float
    ablated_probs: tuple[float, ...]


@dataclass(frozen=True)
class CandidateSet:
    indices: tuple[int, ...]
    scores: tuple[float, ...]
    k: int


def token_importance(
    sent: TokenizedSentence,
    index: int,
    oracle: Oracle,
    label: int,
    unk_token: str = DEFAULT_UNK,
    base_probs: np.ndarray | None = None,
) -> ImportanceScore:
    """Score one token; pass base_probs to reuse the original prediction."""
    if not 0 <= index < len(sent.tokens):
        raise IndexError(f"token index {index} out of range")
    if base_probs is None:
        base_probs = oracle.predict(detokenize(sent.tokens))
    ablated = oracle.predict(_ablate(sent, index, unk_token))
    pred = argmax_class(ablated)
    score = float(base_probs[label] - ablated[label])
    if pred != label:
        score += float(ablated[pred] - base_probs[pred])
    return ImportanceScore(index=index, score=score, ablated_probs=tuple(float(p) for p in ablated))


def rank_tokens(
    sent: TokenizedSentence,
    oracle: Oracle,
    label: int,
    k: int,
    unk_token: str = DEFAULT_UNK,
    base_probs: np.ndarray | None = None,
) -> CandidateSet:
    """Top-k token indices by importance, using exactly n+1 oracle calls
    (n when the caller already holds the base prediction).

    Sorting is descending by score with ties broken toward the lower
    index.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if base_probs is None:
        base_probs = oracle.predict(detokenize(sent.tokens))
    scores = [
        token_importance(sent, i, oracle, label, unk_token, base_probs).score
        for i in range(len(sent.tokens))
    ]
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))[:k]
    return CandidateSet(
        indices=tuple(order),
        scores=tuple(scores[i] for i in order),
        k=k,
    )
