"""Metrics and reporting: F1 before/after, attack success rate, timing,
code-mixing index, perturbation coverage, and opinion-score ingestion.

Reports are written as versioned JSON plus an aligned text summary whose
columns mirror the usual attack-evaluation layout (F1, Time(s), MOS,
SR_Adv per perturbation budget).
"""

from __future__ import annotations

import csv
import datetime as _dt
import json
import statistics
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .attack import AttackConfig, AttackResult, PerturbationStep
from .corpus import Dataset, TokenizedSentence, tokenize
from .langid import LangLexicon, LanguageTag, tag_token, tag_tokens
from .perturb import PerturbationDicts, PerturbationTechnique, perturb_audit

REPORT_SCHEMA = 1
DENOMINATOR_RULES = ("correct", "all")


def macro_f1(preds: Sequence[int], golds: Sequence[int], num_classes: int) -> float:
    """Unweighted mean of per-class F1; classes absent from the gold
    labels are skipped rather than counted as zero."""
    if len(preds) != len(golds):
        raise ValueError(f"length mismatch: {len(preds)} predictions vs {len(golds)} golds")
    if not golds:
        raise ValueError("empty inputs")
    scores = []
    for cls in range(num_classes):
        if cls not in golds:
            continue
        tp = sum(1 for p, g in zip(preds, golds) if p == cls and g == cls)
        fp = sum(1 for p, g in zip(preds, golds) if p == cls and g != cls)
        fn = sum(1 for p, g in zip(preds, golds) if p != cls and g == cls)
        scores.append(2 * tp / (2 * tp + fp + fn))
    return statistics.fmean(scores)


def attack_success_rate(results: Sequence[AttackResult], denominator: str = "correct") -> float:
    """Fraction of eligible examples where the attack flipped the label."""
    if denominator not in DENOMINATOR_RULES:
        raise ValueError(f"denominator must be one of {DENOMINATOR_RULES}")
    if not results:
        raise ValueError("no attack results")
    if denominator == "correct":
        eligible = [r for r in results if r.original_pred == r.original_label]
    else:
        eligible = list(results)
    if not eligible:
        raise ValueError("no eligible examples for the configured denominator")
    return sum(1 for r in eligible if r.success) / len(eligible)


def cmi(sent: TokenizedSentence) -> float:
    """Code-Mixing Index: 100 * (1 - max_lang/(n - u)); 0 when monolingual
    or when only language-independent tokens remain."""
    if any(tag is LanguageTag.UNTAGGED for tag in sent.tags):
        raise ValueError("sentence must be fully tagged before computing CMI")
    n = len(sent.tags)
    u = sum(1 for tag in sent.tags if tag is LanguageTag.UNIVERSAL)
    if n == 0 or n == u:
        return 0.0
    max_lang = max(
        sum(1 for tag in sent.tags if tag is lang) for lang in (LanguageTag.L1, LanguageTag.L2)
    )
    return 100.0 * (1.0 - max_lang / (n - u))


@dataclass(frozen=True)
class MosAnnotation:
    sentence_id: str
    annotator_id: str
    k: int
    score: int


@dataclass(frozen=True)
class MosSummary:
    per_k: dict[int, float]
    overall: float


def load_mos(path: str | Path) -> list[MosAnnotation]:
    """Read a `sentence_id,annotator_id,k,score` CSV of human similarity scores."""
    path = Path(path)
    with open(path, encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or rows[0] != ["sentence_id", "annotator_id", "k", "score"]:
        raise ValueError(f"{path}: expected header 'sentence_id,annotator_id,k,score'")
    annotations = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 columns")
        try:
            k = int(row[2])
            score = int(row[3])
        except ValueError:
            raise ValueError(f"{path}:{lineno}: k and score must be integers") from None
        if score not in (0, 1, 2, 3, 4):
            raise ValueError(f"{path}:{lineno}: score {score} outside 0-4")
        annotations.append(MosAnnotation(row[0], row[1], k, score))
    if not annotations:
        raise ValueError(f"{path}: no annotations")
    return annotations


def aggregate_mos(annotations: Iterable[MosAnnotation]) -> MosSummary:
    """Arithmetic mean score per perturbation budget, plus the overall mean."""
    annotations = list(annotations)
    if not annotations:
        raise ValueError("no annotations")
    per_k: dict[int, list[int]] = {}
    for ann in annotations:
        per_k.setdefault(ann.k, []).append(ann.score)
    return MosSummary(
        per_k={k: statistics.fmean(scores) for k, scores in sorted(per_k.items())},
        overall=statistics.fmean(ann.score for ann in annotations),
    )


@dataclass(frozen=True)
class SentenceRecord:
    id: str
    n_tokens: int
    gold: int
    original_pred: int
    predicted_after: int
    success: bool
    skipped: bool
    prob_drop: float
    oracle_calls: int
    time_s: float
    cmi: float
    cmi_adv: float
    adversarial_text: str
    steps: tuple[PerturbationStep, ...]


@dataclass(frozen=True)
class EvalReport:
    schema: int
    created_at: str
    k: int
    config: dict
    denominator: str
    class_names: tuple[str, ...]
    f1_before: float
    f1_after: float
    sr_adv: float
    sr_adv_all: float
    n_examples: int
    n_eligible: int
    n_success: int
    mean_attack_time_s: float
    mean_cmi: float
    mean_cmi_adv: float
    sr_perturb: dict[str, float]
    mos: float | None
    records: tuple[SentenceRecord, ...]


def recompute_aggregates(records: Sequence[SentenceRecord], num_classes: int, denominator: str) -> dict:
    """Aggregate metrics derived purely from per-sentence records."""
    if not records:
        raise ValueError("no records")
    golds = [r.gold for r in records]
    eligible = [r for r in records if r.original_pred == r.gold]
    pool = eligible if denominator == "correct" else list(records)
    if not pool:
        raise ValueError("no eligible examples for the configured denominator")
    return {
        "f1_before": macro_f1([r.original_pred for r in records], golds, num_classes),
        "f1_after": macro_f1([r.predicted_after for r in records], golds, num_classes),
        "sr_adv": sum(1 for r in pool if r.success) / len(pool),
        "sr_adv_all": sum(1 for r in records if r.success) / len(records),
        "n_examples": len(records),
        "n_eligible": len(eligible),
        "n_success": sum(1 for r in records if r.success),
        "mean_attack_time_s": statistics.fmean(r.time_s for r in records),
        "mean_cmi": statistics.fmean(r.cmi for r in records),
        "mean_cmi_adv": statistics.fmean(r.cmi_adv for r in records),
    }


def dataset_vocabulary(dataset: Dataset, lexicon: LangLexicon) -> list[tuple[str, LanguageTag]]:
    """Sorted unique (token, tag) pairs across the dataset."""
    tokens = sorted({tok for ex in dataset.examples for tok in tokenize(ex.text).tokens})
    return [(tok, tag_token(tok, lexicon)) for tok in tokens]


def build_report(
    dataset: Dataset,
    results: Sequence[AttackResult],
    lexicon: LangLexicon,
    dicts: PerturbationDicts,
    config: AttackConfig,
    denominator: str = "correct",
    mos: MosSummary | None = None,
    config_extra: dict | None = None,
    created_at: str | None = None,
) -> EvalReport:
    """Assemble the full evaluation report for one attack run."""
    if denominator not in DENOMINATOR_RULES:
        raise ValueError(f"denominator must be one of {DENOMINATOR_RULES}")
    if not results:
        raise ValueError("no attack results")
    by_id = {ex.id: ex for ex in dataset.examples}
    records = []
    for res in results:
        ex = by_id.get(res.example_id)
        if ex is None:
            raise ValueError(f"result for unknown example id {res.example_id!r}")
        records.append(
            SentenceRecord(
                id=res.example_id,
                n_tokens=res.n_tokens,
                gold=res.original_label,
                original_pred=res.original_pred,
                predicted_after=res.predicted_label,
                success=res.success,
                skipped=res.skipped,
                prob_drop=res.prob_drop,
                oracle_calls=res.oracle_calls,
                time_s=res.time_s,
                cmi=cmi(tag_tokens(tokenize(ex.text), lexicon)),
                cmi_adv=cmi(tag_tokens(tokenize(res.adversarial_text), lexicon)),
                adversarial_text=res.adversarial_text,
                steps=res.steps,
            )
        )
    aggregates = recompute_aggregates(records, dataset.num_classes, denominator)
    audit = perturb_audit(dataset_vocabulary(dataset, lexicon), dicts)
    config_echo = {
        "k": config.k,
        "technique_order": [t.name for t in config.technique_order],
        "epsilon": config.epsilon,
        "seed": config.seed,
        "unk_token": config.unk_token,
        "repeat_mode": config.repeat_mode,
        "attack_misclassified": config.attack_misclassified,
        "denominator": denominator,
    }
    if config_extra:
        config_echo.update(config_extra)
    return EvalReport(
        schema=REPORT_SCHEMA,
        created_at=created_at if created_at is not None else _dt.datetime.now(_dt.timezone.utc).isoformat(),
        k=config.k,
        config=config_echo,
        denominator=denominator,
        class_names=dataset.class_names,
        sr_perturb={t.name: audit[t] for t in PerturbationTechnique},
        mos=mos.per_k.get(config.k) if mos else None,
        records=tuple(records),
        **aggregates,
    )


def _step_to_dict(step: PerturbationStep) -> dict:
    return {
        "index": step.index,
        "technique": step.technique.name,
        "original": step.original,
        "perturbed": step.perturbed,
        "label_prob_after": step.label_prob_after,
        "flipped": step.flipped,
    }


def _step_from_dict(data: dict) -> PerturbationStep:
    return PerturbationStep(
        index=data["index"],
        technique=PerturbationTechnique[data["technique"]],
        original=data["original"],
        perturbed=data["perturbed"],
        label_prob_after=data["label_prob_after"],
        flipped=data["flipped"],
    )


def report_to_dict(report: EvalReport) -> dict:
    data = {
        "schema": report.schema,
        "created_at": report.created_at,
        "k": report.k,
        "config": report.config,
        "denominator": report.denominator,
        "class_names": list(report.class_names),
        "f1_before": report.f1_before,
        "f1_after": report.f1_after,
        "sr_adv": report.sr_adv,
        "sr_adv_all": report.sr_adv_all,
        "n_examples": report.n_examples,
        "n_eligible": report.n_eligible,
        "n_success": report.n_success,
        "mean_attack_time_s": report.mean_attack_time_s,
        "mean_cmi": report.mean_cmi,
        "mean_cmi_adv": report.mean_cmi_adv,
        "sr_perturb": report.sr_perturb,
        "mos": report.mos,
        "records": [
            {
                "id": r.id,
                "n_tokens": r.n_tokens,
                "gold": r.gold,
                "original_pred": r.original_pred,
                "predicted_after": r.predicted_after,
                "success": r.success,
                "skipped": r.skipped,
                "prob_drop": r.prob_drop,
                "oracle_calls": r.oracle_calls,
                "time_s": r.time_s,
                "cmi": r.cmi,
                "cmi_adv": r.cmi_adv,
                "adversarial_text": r.adversarial_text,
                "steps": [_step_to_dict(s) for s in r.steps],
            }
            for r in report.records
        ],
    }
    return data


def report_from_dict(data: dict) -> EvalReport:
    if data.get("schema") != REPORT_SCHEMA:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    records = tuple(
        SentenceRecord(
            id=r["id"],
            n_tokens=r["n_tokens"],
            gold=r["gold"],
            original_pred=r["original_pred"],
            predicted_after=r["predicted_after"],
            success=r["success"],
            skipped=r["skipped"],
            prob_drop=r["prob_drop"],
            oracle_calls=r["oracle_calls"],
            time_s=r["time_s"],
            cmi=r["cmi"],
            cmi_adv=r["cmi_adv"],
            adversarial_text=r["adversarial_text"],
            steps=tuple(_step_from_dict(s) for s in r["steps"]),
        )
        for r in data["records"]
    )
    return EvalReport(
        schema=data["schema"],
        created_at=data["created_at"],
        k=data["k"],
        config=data["config"],
        denominator=data["denominator"],
        class_names=tuple(data["class_names"]),
        f1_before=data["f1_before"],
        f1_after=data["f1_after"],
        sr_adv=data["sr_adv"],
        sr_adv_all=data["sr_adv_all"],
        n_examples=data["n_examples"],
        n_eligible=data["n_eligible"],
        n_success=data["n_success"],
        mean_attack_time_s=data["mean_attack_time_s"],
        mean_cmi=data["mean_cmi"],
        mean_cmi_adv=data["mean_cmi_adv"],
        sr_perturb=data["sr_perturb"],
        mos=data["mos"],
        records=records,
    )


def summary_table(reports: Sequence[EvalReport], model_name: str = "baseline") -> str:
    """Aligned text table: F1 before the attack, then F1 / Time(s) / MOS /
    SR_Adv for each perturbation budget."""
    if not reports:
        raise ValueError("no reports")
    reports = sorted(reports, key=lambda r: r.k)

    def fmt(value, width=8):
        if value is None:
            return f"{'-':>{width}}"
        return f"{value:>{width}.4f}"

    group_header = f"{'':12}{'Before':>8}"
    col_header = f"{'Model':<12}{'F1':>8}"
    row = f"{model_name:<12}{fmt(reports[0].f1_before)}"
    for rep in reports:
        group = f"Top {rep.k} Words"
        group_header += f"  | {group:^33}"
        col_header += f"  | {'F1':>8}{'Time(s)':>9}{'MOS':>8}{'SR_Adv':>8}"
        row += (
            f"  | {fmt(rep.f1_after)}{fmt(rep.mean_attack_time_s, 9)}"
            f"{fmt(rep.mos)}{fmt(rep.sr_adv)}"
        )
    return "\n".join([group_header, col_header, row]) + "\n"


def emit_report(report: EvalReport, path: str | Path) -> Path:
    """Write the JSON report and an aligned-text summary next to it."""
    path = Path(path)
    path.write_text(
        json.dumps(report_to_dict(report), indent=2, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    path.with_suffix(".txt").write_text(summary_table([report]), encoding="utf-8")
    return path


def load_report(path: str | Path) -> EvalReport:
    return report_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
