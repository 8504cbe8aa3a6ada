"""Token-level language tagging for romanized code-mixed text.

Tags are decided by word-list lookup with a character-trigram
log-likelihood fallback, so tagging is deterministic and needs no
trained model. L1 is the romanized Indic side, L2 is English, and
Universal covers tokens with no alphabetic content (digits, emoji,
punctuation).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from pathlib import Path

NGRAM_ORDER = 3


class LanguageTag(enum.Enum):
    L1 = "l1"
    L2 = "l2"
    UNIVERSAL = "univ"
    UNTAGGED = "untagged"


@dataclass(frozen=True)
class NgramTable:
    """Character trigram counts for one language.

    Scoring uses add-one smoothing: P(g) = (count(g) + 1) / (total + vocab),
    where vocab is the number of distinct trigrams in the table.
    """

    counts: dict[str, float]
    total: float
    vocab: int

    def log_prob(self, gram: str) -> float:
        return math.log10((self.counts.get(gram, 0.0) + 1.0) / (self.total + self.vocab))

    def score(self, token: str) -> float:
        """Length-normalized trigram log-likelihood of a token.

        Tokens shorter than the trigram order contribute no evidence and
        score 0, which pushes the decision to the tie-break.
        """
        grams = [token[i : i + NGRAM_ORDER] for i in range(len(token) - NGRAM_ORDER + 1)]
        if not grams or self.vocab == 0:
            return 0.0
        return sum(self.log_prob(g) for g in grams) / len(token)


@dataclass(frozen=True)
class LangLexicon:
    l1_words: frozenset[str]
    l2_words: frozenset[str]
    l1_ngrams: NgramTable | None = None
    l2_ngrams: NgramTable | None = None


def _read_words(path: Path) -> set[str]:
    words = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            word = line.strip().lower()
            if word:
                words.add(word)
    return words


def _read_ngrams(path: Path) -> NgramTable:
    counts: dict[str, float] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            parts = line.rstrip("\n").split("\t")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'ngram<TAB>log10_freq'")
            gram, raw = parts
            try:
                counts[gram] = 10.0 ** float(raw)
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad log10 frequency {raw!r}") from None
    return NgramTable(counts=counts, total=sum(counts.values()), vocab=len(counts))


def load_lang_lexicon(directory: str | Path) -> LangLexicon:
    """Load `l1.txt`/`l2.txt` word lists plus optional trigram tables.

    A word present in both lists is removed from both so the trigram
    fallback decides it.
    """
    directory = Path(directory)
    for name in ("l1.txt", "l2.txt"):
        if not (directory / name).is_file():
            raise FileNotFoundError(f"missing word list {directory / name}")
    l1 = _read_words(directory / "l1.txt")
    l2 = _read_words(directory / "l2.txt")
    both = l1 & l2
    l1 -= both
    l2 -= both

    tables: dict[str, NgramTable | None] = {"l1": None, "l2": None}
    for side in ("l1", "l2"):
        ngram_path = directory / f"{side}.ngrams.tsv"
        if ngram_path.is_file():
            tables[side] = _read_ngrams(ngram_path)
    return LangLexicon(
        l1_words=frozenset(l1),
        l2_words=frozenset(l2),
        l1_ngrams=tables["l1"],
        l2_ngrams=tables["l2"],
    )


def tag_token(token: str, lex: LangLexicon) -> LanguageTag:
    """Tag a single token; Universal if it has no alphabetic character."""
    if not any(ch.isalpha() for ch in token):
        return LanguageTag.UNIVERSAL
    lowered = token.lower()
    if lowered in lex.l1_words:
        return LanguageTag.L1
    if lowered in lex.l2_words:
        return LanguageTag.L2
    s1 = lex.l1_ngrams.score(lowered) if lex.l1_ngrams else 0.0
    s2 = lex.l2_ngrams.score(lowered) if lex.l2_ngrams else 0.0
    # ties go to L2: perturbing a mis-tagged English token is a no-op more
    # often than the converse
    return LanguageTag.L1 if s1 > s2 else LanguageTag.L2


def tag_tokens(sent, lex: LangLexicon):
    """Return the sentence with every token tagged (no Untagged survives)."""
    return replace(sent, tags=tuple(tag_token(tok, lex) for tok in sent.tokens))
