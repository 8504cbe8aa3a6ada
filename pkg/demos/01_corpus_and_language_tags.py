"""Tour of the data model: load the bundled corpus, tokenize, tag each
token with its language, and look at how code-mixed the data is."""

from codemix_adv import bundled, cmi, load_dataset, load_lang_lexicon, tag_tokens, tokenize

train = load_dataset(bundled.train_corpus_path())
test = load_dataset(bundled.test_corpus_path())
print(f"train: {len(train.examples)} examples, test: {len(test.examples)}")
print(f"classes: {train.class_names}")

lexicon = load_lang_lexicon(bundled.lexicon_dir())
print(f"lexicon: {len(lexicon.l1_words)} l1 words, {len(lexicon.l2_words)} l2 words")

print("\na few tagged sentences:")
for ex in test.examples[:4]:
    sent = tag_tokens(tokenize(ex.text), lexicon)
    rendered = "  ".join(f"{tok}/{tag.value}" for tok, tag in zip(sent.tokens, sent.tags))
    print(f"  [{test.class_names[ex.label]:<8}] {rendered}")
    print(f"             code-mixing index: {cmi(sent):.2f}")

values = [cmi(tag_tokens(tokenize(ex.text), lexicon)) for ex in test.examples]
print(f"\nmean CMI over the test split: {sum(values) / len(values):.2f}")
print(f"fully monolingual sentences: {sum(1 for v in values if v == 0.0)}")
