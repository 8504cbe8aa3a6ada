"""Dataset ingestion, tokenization, and the sentence/label data model.

Datasets are UTF-8 TSV/CSV files with a header and columns ``id``,
``text``, ``label``. The class set must be declared, either inline in
the header as ``label(name1,name2,...)`` or through a sidecar file
``<dataset>.labels`` with one class name per line; class indices follow
the declared order.
"""

from __future__ import annotations

import csv
import re
import unicodedata
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from .langid import LanguageTag

_LABEL_HEADER = re.compile(r"^label\((?P<names>.+)\)$")


@dataclass(frozen=True)
class LabeledExample:
    id: str
    text: str
    label: int


@dataclass(frozen=True)
class TokenizedSentence:
    tokens: tuple[str, ...]
    tags: tuple[LanguageTag, ...]

    def __post_init__(self):
        if len(self.tokens) != len(self.tags):
            raise ValueError("tokens and tags must be parallel")


@dataclass(frozen=True)
class Dataset:
    examples: tuple[LabeledExample, ...]
    class_names: tuple[str, ...]

    @property
    def num_classes(self) -> int:
        return len(self.class_names)


def normalize(text: str) -> str:
    """NFC-normalize and collapse all Unicode whitespace runs to single spaces."""
    return " ".join(unicodedata.normalize("NFC", text).split())


def tokenize(text: str) -> TokenizedSentence:
    """Whitespace tokenization; tags start out Untagged.

    Punctuation stays attached to its token, matching how the
    perturbation dictionaries treat social-media tokens.
    """
    tokens = tuple(normalize(text).split(" ")) if normalize(text) else ()
    return TokenizedSentence(tokens=tokens, tags=(LanguageTag.UNTAGGED,) * len(tokens))


def detokenize(tokens: Iterable[str]) -> str:
    return " ".join(tokens)


def _dialect_for(path: Path, fmt: str | None) -> str:
    if fmt is None:
        fmt = "csv" if path.suffix.lower() == ".csv" else "tsv"
    if fmt not in ("tsv", "csv"):
        raise ValueError(f"unsupported dataset format {fmt!r}")
    return fmt


def _make_reader(fh, fmt: str):
    if fmt == "tsv":
        return csv.reader(fh, delimiter="\t", quoting=csv.QUOTE_NONE)
    return csv.reader(fh)


def _write_row(fh, row: list[str], fmt: str) -> None:
    if fmt == "tsv":
        for field in row:
            if "\t" in field or "\n" in field:
                raise ValueError(f"field {field!r} cannot be stored in TSV")
        fh.write("\t".join(row) + "\n")
    else:
        csv.writer(fh, lineterminator="\n").writerow(row)


def _sidecar_path(path: Path) -> Path:
    return path.with_suffix(".labels")


def _declared_classes(header: list[str], path: Path) -> tuple[str, ...]:
    if len(header) != 3 or header[0] != "id" or header[1] != "text":
        raise ValueError(f"{path}:1: header must be 'id, text, label[(classes)]', got {header!r}")
    match = _LABEL_HEADER.match(header[2])
    if match:
        names = tuple(name.strip() for name in match.group("names").split(","))
        if any(not n for n in names):
            raise ValueError(f"{path}:1: empty class name in header")
        return names
    if header[2] != "label":
        raise ValueError(f"{path}:1: third column must be 'label' or 'label(...)'")
    sidecar = _sidecar_path(path)
    if not sidecar.is_file():
        raise ValueError(
            f"{path}: classes not declared; use a 'label(...)' header or a sidecar {sidecar.name} file"
        )
    names = tuple(
        line.strip() for line in sidecar.read_text(encoding="utf-8").splitlines() if line.strip()
    )
    if not names:
        raise ValueError(f"{sidecar}: no class names")
    return names


def load_dataset(path: str | Path, fmt: str | None = None) -> Dataset:
    """Load a labeled dataset, mapping label strings to declared indices."""
    path = Path(path)
    fmt = _dialect_for(path, fmt)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(_make_reader(fh, fmt))
    if not rows:
        raise ValueError(f"{path}: no examples (empty file)")
    class_names = _declared_classes(rows[0], path)
    label_index = {name: i for i, name in enumerate(class_names)}

    examples = []
    seen_ids = set()
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise ValueError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
        ex_id, text, label = row
        if not text.strip():
            raise ValueError(f"{path}:{lineno}: empty text")
        if label not in label_index:
            raise ValueError(
                f"{path}:{lineno}: unknown label {label!r}; valid classes: {', '.join(class_names)}"
            )
        if ex_id in seen_ids:
            raise ValueError(f"{path}:{lineno}: duplicate id {ex_id!r}")
        seen_ids.add(ex_id)
        examples.append(LabeledExample(id=ex_id, text=text, label=label_index[label]))
    if not examples:
        raise ValueError(f"{path}: no examples")
    return Dataset(examples=tuple(examples), class_names=class_names)


def save_dataset(dataset: Dataset, path: str | Path, fmt: str | None = None) -> None:
    """Write a dataset back out with an inline class declaration."""
    path = Path(path)
    fmt = _dialect_for(path, fmt)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write_row(fh, ["id", "text", f"label({','.join(dataset.class_names)})"], fmt)
        for ex in dataset.examples:
            _write_row(fh, [ex.id, ex.text, dataset.class_names[ex.label]], fmt)
