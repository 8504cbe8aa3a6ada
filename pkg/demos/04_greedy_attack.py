"""The full greedy attack: per-sentence traces, then the budget sweep
that mirrors the report tables."""

from codemix_adv import (
    AttackConfig,
    InProcessOracle,
    attack_dataset,
    attack_sentence,
    attack_success_rate,
    bundled,
    load_dataset,
    load_lang_lexicon,
    load_perturbation_dicts,
    macro_f1,
    train_baseline,
)

train = load_dataset(bundled.train_corpus_path())
test = load_dataset(bundled.test_corpus_path())
model = train_baseline(train, seed=0)
dicts = load_perturbation_dicts(bundled.dicts_dir())
lexicon = load_lang_lexicon(bundled.lexicon_dir())

print("single-sentence traces (k=4):")
for ex in test.examples[:6]:
    result = attack_sentence(ex, InProcessOracle(model), dicts, lexicon, AttackConfig(k=4, seed=0))
    verdict = "FLIPPED" if result.success else "held"
    print(f"\n  {ex.text!r} [{test.class_names[ex.label]}] -> {verdict}")
    for step in result.steps:
        marker = "*" if step.flipped else " "
        print(
            f"   {marker} {step.technique.name:<16} {step.original} -> {step.perturbed}"
            f"   p(label)={step.label_prob_after:.3f}"
        )
    if result.success:
        print(f"    adversarial: {result.adversarial_text!r}")
        print(f"    oracle calls {result.oracle_calls}, drop {result.prob_drop:.3f}")

golds = [ex.label for ex in test.examples]
before = macro_f1(
    [int(model.predict_probs(ex.text).argmax()) for ex in test.examples], golds, test.num_classes
)
print(f"\nbudget sweep on the full test split (macro-F1 before attack {before:.4f}):")
print(f"  {'k':>3} {'F1 after':>9} {'SR_Adv':>7} {'mean ms':>8}")
for k in (2, 4, 8):
    outcome = attack_dataset(test, InProcessOracle(model), dicts, lexicon, AttackConfig(k=k, seed=0))
    f1 = macro_f1([r.predicted_label for r in outcome.results], golds, test.num_classes)
    sr = attack_success_rate(outcome.results, "correct")
    mean_ms = 1000 * sum(r.time_s for r in outcome.results) / len(outcome.results)
    print(f"  {k:>3} {f1:>9.4f} {sr:>7.4f} {mean_ms:>8.2f}")
