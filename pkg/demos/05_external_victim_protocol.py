"""Attacking a victim that lives in another process: the JSON-lines
protocol, demonstrated against the bundled stub adapter.

Any classifier becomes attackable by speaking four message shapes on
stdin/stdout:

    -> {"op": "hello"}
    <- {"op": "hello", "classes": M}
    -> {"op": "predict", "id": "1", "text": "..."}
    <- {"op": "prediction", "id": "1", "probs": [p0, ..., pM-1]}
"""

import sys

from codemix_adv import (
    AttackConfig,
    OracleProtocolError,
    attack_sentence,
    bundled,
    load_dataset,
    load_lang_lexicon,
    load_perturbation_dicts,
    open_external,
)

STUB = [sys.executable, "-m", "codemix_adv.stub_adapter", "--classes", "3", "--mode", "hash"]

test = load_dataset(bundled.test_corpus_path())
dicts = load_perturbation_dicts(bundled.dicts_dir())
lexicon = load_lang_lexicon(bundled.lexicon_dir())

with open_external(STUB, num_classes=3, timeout=10.0) as oracle:
    print("handshake complete; the adapter serves 3 classes")
    probs = oracle.predict(test.examples[0].text)
    print(f"first prediction: {probs.round(3).tolist()}")

    result = attack_sentence(test.examples[0], oracle, dicts, lexicon, AttackConfig(k=4, seed=0))
    print(f"attack over the wire: success={result.success}, oracle calls={result.oracle_calls}")

print("\nthe adapter must declare the class count the engine expects:")
try:
    open_external([sys.executable, "-m", "codemix_adv.stub_adapter", "--classes", "2"], 3, timeout=10.0)
except OracleProtocolError as exc:
    print(f"  rejected as expected: {exc}")
