"""Train the in-process victim, then watch the masked-token importance
ranking decide which tokens an attack should go after."""

from codemix_adv import (
    InProcessOracle,
    bundled,
    load_dataset,
    macro_f1,
    rank_tokens,
    tokenize,
    train_baseline,
)

train = load_dataset(bundled.train_corpus_path())
test = load_dataset(bundled.test_corpus_path())
model = train_baseline(train, seed=0)

preds = [int(model.predict_probs(ex.text).argmax()) for ex in test.examples]
golds = [ex.label for ex in test.examples]
print(f"victim: softmax regression over {len(model.feature_index)} char/word features")
print(f"held-out macro-F1: {macro_f1(preds, golds, test.num_classes):.4f}")

example = next(ex for ex in test.examples if "bhalo" in ex.text)
sent = tokenize(example.text)
oracle = InProcessOracle(model)
probs = oracle.predict(example.text)
print(f"\nsentence: {example.text!r}")
print(f"gold label {test.class_names[example.label]}, prediction {probs.round(3).tolist()}")

ranked = rank_tokens(sent, oracle, example.label, k=len(sent.tokens))
print("\ntokens by importance (masking each and watching the probabilities):")
for index, score in zip(ranked.indices, ranked.scores):
    print(f"  {sent.tokens[index]:<12} score {score:+.4f}")
print(f"\noracle calls spent on the ranking: {oracle.calls} (= tokens + 1)")
