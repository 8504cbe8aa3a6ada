import time
from dataclasses import dataclass

import pytest

from codemix_adv import (
    AttackConfig,
    InProcessOracle,
    attack_dataset,
    load_dataset,
    load_lang_lexicon,
    load_perturbation_dicts,
    macro_f1,
    train_baseline,
)
from codemix_adv import bundled


@pytest.fixture(scope="session")
def dicts():
    return load_perturbation_dicts(bundled.dicts_dir())


@pytest.fixture(scope="session")
def lexicon():
    return load_lang_lexicon(bundled.lexicon_dir())


@pytest.fixture(scope="session")
def toy_setup(tmp_path_factory):
    """Tiny dictionaries and lexicon with fully known contents, for
    hand-traced attack scenarios."""
    root = tmp_path_factory.mktemp("toy")
    dicts_dir = root / "dicts"
    lex_dir = root / "lexicon"
    dicts_dir.mkdir()
    lex_dir.mkdir()
    (dicts_dir / "phonetic.l1.tsv").write_text("bha\tva\naa\ta\n", encoding="utf-8")
    (dicts_dir / "repeat.l1.tsv").write_text("o\t2\n", encoding="utf-8")
    (dicts_dir / "translit.tsv").write_text("mon\tl1\tmind\ndin\tl1\tday\n", encoding="utf-8")
    (lex_dir / "l1.txt").write_text("bhalo\nmon\ndin\nkaaj\n", encoding="utf-8")
    (lex_dir / "l2.txt").write_text("good\nwork\n", encoding="utf-8")
    return load_perturbation_dicts(dicts_dir), load_lang_lexicon(lex_dir)


@dataclass
class DeskRun:
    train: object
    test: object
    model: object
    f1_before: float
    runs: dict  # k -> tuple[AttackResult, ...]
    train_seconds: float
    total_seconds: float


@pytest.fixture(scope="session")
def desk(dicts, lexicon):
    """One full desk-scale run: train the bundled baseline, attack the
    bundled test split at k = 2, 4, 8."""
    started = time.perf_counter()
    train = load_dataset(bundled.train_corpus_path())
    test = load_dataset(bundled.test_corpus_path())
    model = train_baseline(train, seed=0)
    train_seconds = time.perf_counter() - started

    preds = [int(model.predict_probs(ex.text).argmax()) for ex in test.examples]
    f1_before = macro_f1(preds, [ex.label for ex in test.examples], test.num_classes)

    runs = {}
    for k in (2, 4, 8):
        outcome = attack_dataset(test, InProcessOracle(model), dicts, lexicon, AttackConfig(k=k, seed=0))
        assert not outcome.errors
        runs[k] = outcome.results
    return DeskRun(
        train=train,
        test=test,
        model=model,
        f1_before=f1_before,
        runs=runs,
        train_seconds=train_seconds,
        total_seconds=time.perf_counter() - started,
    )
