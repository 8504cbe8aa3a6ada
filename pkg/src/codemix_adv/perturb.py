"""Semantics-preserving token perturbations for code-mixed text.

Three techniques, each a partial function from token to token:

* sub-word: swap one phonetically interchangeable character group
  (``bhalo`` -> ``valo``),
* character repetition: duplicate one frequently-repeated character,
  mimicking social-media emphasis (``mafi`` -> ``mafii``),
* switch-word: replace the whole token with its rendering in the
  complementary language (``bacha`` -> ``baby``).

All three are dictionary-driven; the dictionaries are plain TSV files so
new language pairs only need new data.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from pathlib import Path

from .langid import LanguageTag

_PERTURBABLE = (LanguageTag.L1, LanguageTag.L2)


@enum.unique
class PerturbationTechnique(enum.IntEnum):
    """Attack techniques in their default trial order."""

    SUB_WORD = 1
    CHAR_REPETITION = 2
    SWITCH_WORD = 3


DEFAULT_TECHNIQUE_ORDER = (
    PerturbationTechnique.SUB_WORD,
    PerturbationTechnique.CHAR_REPETITION,
    PerturbationTechnique.SWITCH_WORD,
)


@dataclass(frozen=True)
class PhoneticGroupDict:
    """Per-language map from character group (1-3 chars) to replacement groups."""

    groups: dict[LanguageTag, dict[str, tuple[str, ...]]]


@dataclass(frozen=True)
class RepetitionDict:
    """Per-language map from character to the max extra repetitions allowed."""

    chars: dict[LanguageTag, dict[str, int]]


@dataclass(frozen=True)
class TranslitLexicon:
    """(token, source tag) -> single-token rendering in the other language."""

    entries: dict[tuple[str, LanguageTag], str]


@dataclass(frozen=True)
class PerturbationDicts:
    phonetic: PhoneticGroupDict
    repetition: RepetitionDict
    translit: TranslitLexicon


_SIDE_TAGS = {"l1": LanguageTag.L1, "l2": LanguageTag.L2}


def _read_tsv(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            yield lineno, line.split("\t")


def load_phonetic_dict(directory: Path) -> PhoneticGroupDict:
    groups: dict[LanguageTag, dict[str, tuple[str, ...]]] = {}
    for side, tag in _SIDE_TAGS.items():
        path = directory / f"phonetic.{side}.tsv"
        table: dict[str, tuple[str, ...]] = {}
        if path.is_file():
            for lineno, parts in _read_tsv(path):
                if len(parts) != 2 or not parts[0] or not parts[1]:
                    raise ValueError(f"{path}:{lineno}: expected 'key<TAB>rep1,rep2,...'")
                key = parts[0]
                if not 1 <= len(key) <= 3:
                    raise ValueError(f"{path}:{lineno}: key {key!r} must be 1-3 chars")
                reps = tuple(r for r in parts[1].split(",") if r)
                if not reps:
                    raise ValueError(f"{path}:{lineno}: no replacements for {key!r}")
                if all(r == key for r in reps):
                    raise ValueError(f"{path}:{lineno}: key {key!r} only maps to itself")
                if any(ch.isspace() for r in reps for ch in r):
                    raise ValueError(f"{path}:{lineno}: whitespace in replacement")
                table[key] = reps
        groups[tag] = table
    return PhoneticGroupDict(groups=groups)


def load_repetition_dict(directory: Path) -> RepetitionDict:
    chars: dict[LanguageTag, dict[str, int]] = {}
    for side, tag in _SIDE_TAGS.items():
        path = directory / f"repeat.{side}.tsv"
        table: dict[str, int] = {}
        if path.is_file():
            for lineno, parts in _read_tsv(path):
                if len(parts) != 2 or len(parts[0]) != 1:
                    raise ValueError(f"{path}:{lineno}: expected 'char<TAB>max_reps'")
                try:
                    cap = int(parts[1])
                except ValueError:
                    raise ValueError(f"{path}:{lineno}: bad repetition cap {parts[1]!r}") from None
                if cap < 1:
                    raise ValueError(f"{path}:{lineno}: repetition cap must be >= 1")
                table[parts[0]] = cap
        chars[tag] = table
    return RepetitionDict(chars=chars)


def load_translit_lexicon(path: Path) -> TranslitLexicon:
    entries: dict[tuple[str, LanguageTag], str] = {}
    for lineno, parts in _read_tsv(path):
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'token<TAB>src_tag<TAB>replacement'")
        token, side, replacement = parts
        if side not in _SIDE_TAGS:
            raise ValueError(f"{path}:{lineno}: source tag must be l1 or l2, got {side!r}")
        if not replacement or any(ch.isspace() for ch in replacement):
            raise ValueError(f"{path}:{lineno}: replacement must be one whitespace-free token")
        entries[(token.lower(), _SIDE_TAGS[side])] = replacement
    return TranslitLexicon(entries=entries)


def load_perturbation_dicts(directory: str | Path) -> PerturbationDicts:
    """Load all perturbation dictionaries from one directory."""
    directory = Path(directory)
    translit_path = directory / "translit.tsv"
    translit = load_translit_lexicon(translit_path) if translit_path.is_file() else TranslitLexicon({})
    return PerturbationDicts(
        phonetic=load_phonetic_dict(directory),
        repetition=load_repetition_dict(directory),
        translit=translit,
    )


def subword_perturb(token: str, tag: LanguageTag, phonetic: PhoneticGroupDict) -> str | None:
    """Replace the leftmost-longest phonetic group occurring in the token.

    Only the first occurrence is rewritten, using the first replacement
    that actually changes the token; None when no group occurs.
    """
    table = phonetic.groups.get(tag)
    if not table:
        return None
    for start in range(len(token)):
        for length in (3, 2, 1):
            key = token[start : start + length]
            if len(key) == length and key in table:
                for rep in table[key]:
                    candidate = token[:start] + rep + token[start + length :]
                    if candidate != token:
                        return candidate
                return None
    return None


def _repeat_positions(token: str, caps: dict[str, int]) -> list[int]:
    """Positions whose character may still be duplicated under its cap.

    The cap bounds cumulative repetitions: a run of the same character may
    grow to at most 1 + cap copies, so re-perturbing an already stretched
    token stays within the dictionary's limit.
    """
    positions = []
    i = 0
    while i < len(token):
        j = i
        while j < len(token) and token[j] == token[i]:
            j += 1
        cap = caps.get(token[i])
        if cap is not None and (j - i) <= cap:
            positions.extend(range(i, j))
        i = j
    return positions


def char_repeat_perturb(
    token: str,
    tag: LanguageTag,
    repetition: RepetitionDict,
    rng: random.Random | None = None,
) -> str | None:
    """Duplicate one dictionary character in place (length grows by 1).

    Deterministic mode (rng=None) picks the first eligible position;
    passing a seeded rng picks among eligible positions.
    """
    caps = repetition.chars.get(tag)
    if not caps:
        return None
    positions = _repeat_positions(token, caps)
    if not positions:
        return None
    pos = positions[0] if rng is None else rng.choice(positions)
    return token[: pos + 1] + token[pos] + token[pos + 1 :]


def switch_word_perturb(token: str, tag: LanguageTag, translit: TranslitLexicon) -> str | None:
    """Exact lexicon lookup of (token, tag); None on a miss."""
    replacement = translit.entries.get((token.lower(), tag))
    if replacement is None or replacement == token:
        return None
    return replacement


def apply_technique(
    token: str,
    tag: LanguageTag,
    technique: PerturbationTechnique,
    dicts: PerturbationDicts,
    rng: random.Random | None = None,
) -> str | None:
    """Run one technique on a token; Universal tokens are never perturbed."""
    if tag not in _PERTURBABLE:
        return None
    if technique is PerturbationTechnique.SUB_WORD:
        return subword_perturb(token, tag, dicts.phonetic)
    if technique is PerturbationTechnique.CHAR_REPETITION:
        return char_repeat_perturb(token, tag, dicts.repetition, rng)
    if technique is PerturbationTechnique.SWITCH_WORD:
        return switch_word_perturb(token, tag, dicts.translit)
    raise ValueError(f"unknown technique {technique!r}")


def perturb_audit(
    vocab: list[tuple[str, LanguageTag]],
    dicts: PerturbationDicts,
) -> dict[PerturbationTechnique, float]:
    """Percentage of vocabulary tokens each technique can perturb at all."""
    if not vocab:
        raise ValueError("empty vocabulary")
    rates = {}
    for technique in PerturbationTechnique:
        hits = sum(1 for token, tag in vocab if apply_technique(token, tag, technique, dicts) is not None)
        rates[technique] = 100.0 * hits / len(vocab)
    return rates
