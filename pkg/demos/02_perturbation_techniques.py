"""The three perturbation techniques, one by one, plus the coverage audit
that says how much of a vocabulary each technique can touch."""

from codemix_adv import (
    LanguageTag,
    PerturbationTechnique,
    apply_technique,
    bundled,
    load_dataset,
    load_lang_lexicon,
    load_perturbation_dicts,
    perturb_audit,
)
from codemix_adv.metrics import dataset_vocabulary

dicts = load_perturbation_dicts(bundled.dicts_dir())
L1 = LanguageTag.L1

print("sub-word: swap one phonetically interchangeable character group")
for token in ("bhalo", "gajab", "kharap", "khub"):
    print(f"  {token} -> {apply_technique(token, L1, PerturbationTechnique.SUB_WORD, dicts)}")

print("\ncharacter repetition: stretch one frequently-repeated character")
for token in ("mafi", "paoa", "darun", "bhalo"):
    print(f"  {token} -> {apply_technique(token, L1, PerturbationTechnique.CHAR_REPETITION, dicts)}")

print("\nswitch-word: jump to the complementary language")
for token in ("bacha", "byaah", "bhalo", "kharap"):
    print(f"  {token} -> {apply_technique(token, L1, PerturbationTechnique.SWITCH_WORD, dicts)}")

print("\ntokens the dictionaries cannot touch stay untouched:")
print(f"  xxxx -> {apply_technique('xxxx', L1, PerturbationTechnique.SUB_WORD, dicts)}")
print(f"  '!'  -> {apply_technique('!', LanguageTag.UNIVERSAL, PerturbationTechnique.SUB_WORD, dicts)}")

lexicon = load_lang_lexicon(bundled.lexicon_dir())
vocab = dataset_vocabulary(load_dataset(bundled.test_corpus_path()), lexicon)
rates = perturb_audit(vocab, dicts)
print(f"\ncoverage over the {len(vocab)}-token test vocabulary:")
for technique in PerturbationTechnique:
    print(f"  {technique.name:<18}{rates[technique]:6.2f}%")
