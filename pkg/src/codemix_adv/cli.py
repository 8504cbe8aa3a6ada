"""Command-line entry point.

Subcommands wire the corpus, dictionaries, victims, attack loop, and
reports together:

* ``train-baseline``  fit and serialize the in-process victim
* ``attack``          run the attack for one or more budgets k
* ``perturb-audit``   per-technique perturbation coverage of a vocabulary
* ``langid``          tag a text file token by token
* ``report``          re-aggregate a report from its per-sentence records

Option precedence is flags > ``--config`` JSON file > defaults, and every
report echoes the effective configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import shlex
import sys
from pathlib import Path

from . import bundled
from .attack import AttackConfig, attack_dataset
from .corpus import load_dataset, tokenize
from .langid import load_lang_lexicon, tag_token
from .metrics import (
    DENOMINATOR_RULES,
    aggregate_mos,
    build_report,
    emit_report,
    load_mos,
    load_report,
    macro_f1,
    recompute_aggregates,
    report_to_dict,
    summary_table,
)
from .perturb import PerturbationTechnique, load_perturbation_dicts, perturb_audit
from .victim import BaselineModel, InProcessOracle, TrainConfig, open_external, train_baseline

_DEFAULTS = {
    "train-baseline": {
        "seed": 0,
        "learning_rate": 0.1,
        "epochs": 30,
        "l2": 1e-4,
        "test": None,
    },
    "attack": {
        "k": "2,4,8",
        "seed": None,
        "dicts": None,
        "lexicon": None,
        "denominator": "correct",
        "repeat_mode": "first",
        "skip_misclassified": False,
        "fail_fast": False,
        "workers": 1,
        "timeout": 30.0,
        "mos": None,
        "model": None,
        "external": None,
        "unk_token": "[UNK]",
    },
    "perturb-audit": {"dataset": None, "wordlist": None, "dicts": None, "lexicon": None, "out": None},
    "langid": {"lexicon": None, "out": None},
    "report": {"out": None},
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codemix-adv", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    S = argparse.SUPPRESS  # so the config-file merge can see what was explicit

    p = sub.add_parser("train-baseline", help="train and serialize the baseline victim")
    p.add_argument("--train", required=True, help="training dataset (TSV/CSV)")
    p.add_argument("--out", required=True, help="output model file (JSON)")
    p.add_argument("--test", default=S, help="held-out dataset for reported metrics")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--learning-rate", type=float, default=S, dest="learning_rate")
    p.add_argument("--epochs", type=int, default=S)
    p.add_argument("--l2", type=float, default=S)
    p.add_argument("--config", default=None, help="JSON config file (flags win)")

    p = sub.add_parser("attack", help="attack a dataset and emit reports")
    p.add_argument("--test", required=True, help="dataset to attack")
    p.add_argument("--out", required=True, help="output directory for reports")
    p.add_argument("--model", default=S, help="baseline model file (in-process victim)")
    p.add_argument("--external", default=S, help="command line of an external adapter")
    p.add_argument("--dicts", default=S, help=f"dictionary directory (default ${bundled.DICTS_ENV_VAR} or bundled)")
    p.add_argument("--lexicon", default=S, help="language lexicon directory (default bundled)")
    p.add_argument("--k", default=S, help="comma-separated perturbation budgets, e.g. 2,4,8")
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--denominator", choices=DENOMINATOR_RULES, default=S)
    p.add_argument("--repeat-mode", choices=["first", "random"], default=S, dest="repeat_mode")
    p.add_argument("--skip-misclassified", action="store_true", default=S, dest="skip_misclassified")
    p.add_argument("--fail-fast", action="store_true", default=S, dest="fail_fast")
    p.add_argument("--workers", type=int, default=S)
    p.add_argument("--timeout", type=float, default=S, help="per-request timeout for external victims")
    p.add_argument("--mos", default=S, help="MOS annotations CSV to fold into reports")
    p.add_argument("--unk-token", default=S, dest="unk_token")
    p.add_argument("--config", default=None)

    p = sub.add_parser("perturb-audit", help="perturbation coverage of a vocabulary")
    p.add_argument("--dataset", default=S, help="dataset whose vocabulary to audit")
    p.add_argument("--wordlist", default=S, help="plain word list to audit instead")
    p.add_argument("--dicts", default=S)
    p.add_argument("--lexicon", default=S)
    p.add_argument("--out", default=S, help="optional JSON output path")
    p.add_argument("--config", default=None)

    p = sub.add_parser("langid", help="tag tokens of a text file")
    p.add_argument("--input", required=True, help="text file, one sentence per line")
    p.add_argument("--lexicon", default=S)
    p.add_argument("--out", default=S, help="output TSV (default stdout)")
    p.add_argument("--config", default=None)

    p = sub.add_parser("report", help="re-aggregate a report from per-sentence records")
    p.add_argument("--records", required=True, help="existing report JSON")
    p.add_argument("--out", default=S, help="write the recomputed report here")
    p.add_argument("--config", default=None)

    return parser


def _effective_options(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    options = dict(_DEFAULTS.get(args.command, {}))
    config_path = getattr(args, "config", None)
    if config_path:
        try:
            file_options = json.loads(Path(config_path).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            parser.error(f"cannot read config file {config_path}: {exc}")
        if not isinstance(file_options, dict):
            parser.error(f"config file {config_path} must hold a JSON object")
        unknown = set(file_options) - set(options)
        if unknown:
            parser.error(f"unknown config keys for {args.command}: {', '.join(sorted(unknown))}")
        options.update(file_options)
    explicit = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    options.update(explicit)
    return options


def _parse_k_list(raw) -> list[int]:
    if isinstance(raw, (list, tuple)):
        values = [int(v) for v in raw]
    else:
        values = [int(part) for part in str(raw).split(",") if part.strip()]
    if not values or any(v < 1 for v in values):
        raise ValueError(f"bad k list {raw!r}")
    return values


def _cmd_train_baseline(opts: dict) -> int:
    train = load_dataset(opts["train"])
    config = TrainConfig(
        learning_rate=float(opts["learning_rate"]),
        epochs=int(opts["epochs"]),
        l2=float(opts["l2"]),
    )
    model = train_baseline(train, config, seed=int(opts["seed"]))
    out = Path(opts["out"])
    out.parent.mkdir(parents=True, exist_ok=True)
    model.save(out)
    print(f"model written to {out}")
    if opts["test"]:
        test = load_dataset(opts["test"])
        preds = [int(model.predict_probs(ex.text).argmax()) for ex in test.examples]
        golds = [ex.label for ex in test.examples]
        print(f"held-out macro-F1: {macro_f1(preds, golds, test.num_classes):.4f}")
    return 0


def _cmd_attack(opts: dict, parser: argparse.ArgumentParser) -> int:
    if (opts["model"] is None) == (opts["external"] is None):
        parser.error("exactly one of --model / --external is required")
    if opts["repeat_mode"] == "random" and opts["seed"] is None:
        parser.error("--seed is required when --repeat-mode random")
    seed = int(opts["seed"]) if opts["seed"] is not None else 0
    k_list = _parse_k_list(opts["k"])

    dataset = load_dataset(opts["test"])
    dicts_dir = Path(opts["dicts"]) if opts["dicts"] else bundled.dicts_dir()
    lexicon_dir = Path(opts["lexicon"]) if opts["lexicon"] else bundled.lexicon_dir()
    dicts = load_perturbation_dicts(dicts_dir)
    lexicon = load_lang_lexicon(lexicon_dir)

    workers = int(opts["workers"])
    if opts["model"]:
        model = BaselineModel.load(opts["model"])
        if model.num_classes != dataset.num_classes:
            print(f"error: model has {model.num_classes} classes, dataset {dataset.num_classes}", file=sys.stderr)
            return 1
        oracle_factory = lambda: InProcessOracle(model)
        victim_info = {"model": str(opts["model"])}
    else:
        cmd = shlex.split(opts["external"])
        oracle_factory = lambda: open_external(cmd, dataset.num_classes, timeout=float(opts["timeout"]))
        victim_info = {"external": opts["external"], "timeout": float(opts["timeout"])}

    mos = aggregate_mos(load_mos(opts["mos"])) if opts["mos"] else None
    out_dir = Path(opts["out"])
    out_dir.mkdir(parents=True, exist_ok=True)

    reports = []
    for k in k_list:
        config = AttackConfig(
            k=k,
            seed=seed,
            unk_token=opts["unk_token"],
            repeat_mode=opts["repeat_mode"],
            attack_misclassified=not opts["skip_misclassified"],
        )
        oracle = oracle_factory() if workers <= 1 else None
        try:
            outcome = attack_dataset(
                dataset,
                oracle,
                dicts,
                lexicon,
                config,
                fail_fast=bool(opts["fail_fast"]),
                workers=workers,
                oracle_factory=oracle_factory if workers > 1 else None,
            )
        finally:
            if oracle is not None and hasattr(oracle, "close"):
                oracle.close()
        if not outcome.results:
            print("error: every attack errored; nothing to report", file=sys.stderr)
            return 1
        report = build_report(
            dataset,
            outcome.results,
            lexicon,
            dicts,
            config,
            denominator=opts["denominator"],
            mos=mos,
            config_extra={
                "dataset": str(opts["test"]),
                "victim": victim_info,
                "workers": workers,
                "dicts_dir": str(dicts_dir),
                "lexicon_dir": str(lexicon_dir),
            },
        )
        emit_report(report, out_dir / f"report_k{k}.json")
        reports.append(report)
        for example_id, message in outcome.errors:
            print(f"warning: {example_id} failed: {message}", file=sys.stderr)

    summary = summary_table(reports)
    (out_dir / "summary.txt").write_text(summary, encoding="utf-8")
    print(summary, end="")
    return 0


def _load_vocab(opts: dict, parser: argparse.ArgumentParser):
    lexicon_dir = Path(opts["lexicon"]) if opts["lexicon"] else bundled.lexicon_dir()
    lexicon = load_lang_lexicon(lexicon_dir)
    if (opts["dataset"] is None) == (opts["wordlist"] is None):
        parser.error("exactly one of --dataset / --wordlist is required")
    if opts["dataset"]:
        dataset = load_dataset(opts["dataset"])
        tokens = sorted({tok for ex in dataset.examples for tok in tokenize(ex.text).tokens})
    else:
        tokens = sorted(
            {
                word
                for line in Path(opts["wordlist"]).read_text(encoding="utf-8").splitlines()
                for word in line.split()
            }
        )
    if not tokens:
        raise ValueError("empty vocabulary")
    return [(tok, tag_token(tok, lexicon)) for tok in tokens]


def _cmd_perturb_audit(opts: dict, parser: argparse.ArgumentParser) -> int:
    dicts_dir = Path(opts["dicts"]) if opts["dicts"] else bundled.dicts_dir()
    dicts = load_perturbation_dicts(dicts_dir)
    vocab = _load_vocab(opts, parser)
    rates = perturb_audit(vocab, dicts)
    print(f"{'technique':<18}{'SR_Perturb':>12}")
    for technique in PerturbationTechnique:
        print(f"{technique.name:<18}{rates[technique]:>11.2f}%")
    if opts["out"]:
        Path(opts["out"]).write_text(
            json.dumps({t.name: rates[t] for t in PerturbationTechnique}, indent=2, sort_keys=True) + "\n",
            encoding="utf-8",
        )
    return 0


def _cmd_langid(opts: dict) -> int:
    lexicon_dir = Path(opts["lexicon"]) if opts["lexicon"] else bundled.lexicon_dir()
    lexicon = load_lang_lexicon(lexicon_dir)
    lines = Path(opts["input"]).read_text(encoding="utf-8").splitlines()
    chunks = []
    for line in lines:
        sent = tokenize(line)
        chunks.extend(f"{tok}\t{tag_token(tok, lexicon).value}" for tok in sent.tokens)
        chunks.append("")
    output = "\n".join(chunks).rstrip("\n") + "\n"
    if opts["out"]:
        Path(opts["out"]).write_text(output, encoding="utf-8")
    else:
        sys.stdout.write(output)
    return 0


def _cmd_report(opts: dict) -> int:
    report = load_report(opts["records"])
    aggregates = recompute_aggregates(report.records, len(report.class_names), report.denominator)
    rebuilt = dataclasses.replace(report, **aggregates)
    if opts["out"]:
        Path(opts["out"]).write_text(
            json.dumps(report_to_dict(rebuilt), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
            encoding="utf-8",
        )
    drift = {
        name: (getattr(report, name), value)
        for name, value in aggregates.items()
        if getattr(report, name) != value
    }
    if drift:
        for name, (stored, recomputed) in drift.items():
            print(f"warning: {name} stored {stored!r} != recomputed {recomputed!r}", file=sys.stderr)
    else:
        print("aggregates consistent with per-sentence records")
    print(summary_table([rebuilt]), end="")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    opts = _effective_options(args, parser)
    try:
        if args.command == "train-baseline":
            return _cmd_train_baseline(opts)
        if args.command == "attack":
            return _cmd_attack(opts, parser)
        if args.command == "perturb-audit":
            return _cmd_perturb_audit(opts, parser)
        if args.command == "langid":
            return _cmd_langid(opts)
        if args.command == "report":
            return _cmd_report(opts)
        parser.error(f"unknown command {args.command!r}")
    except Exception as exc:  # noqa: BLE001 - single-line diagnostics per contract
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
