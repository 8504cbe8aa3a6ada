"""Paths to the sample corpus, dictionaries, and lexicon shipped with the
package. The dictionary directory can be overridden with the
``CODEMIX_ADV_DICTS`` environment variable."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

DICTS_ENV_VAR = "CODEMIX_ADV_DICTS"


def data_dir() -> Path:
    return Path(str(resources.files("codemix_adv") / "data"))


def corpus_dir() -> Path:
    return data_dir() / "corpus"


def train_corpus_path() -> Path:
    return corpus_dir() / "train.tsv"


def test_corpus_path() -> Path:
    return corpus_dir() / "test.tsv"


def dicts_dir() -> Path:
    override = os.environ.get(DICTS_ENV_VAR)
    if override:
        return Path(override)
    return data_dir() / "dicts"


def lexicon_dir() -> Path:
    return data_dir() / "lexicon"
