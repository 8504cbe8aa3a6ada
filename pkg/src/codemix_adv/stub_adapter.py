"""Reference victim adapter for the JSON-lines oracle protocol.

Run as ``python -m codemix_adv.stub_adapter`` to expose a toy classifier
on stdin/stdout. Useful for smoke-testing real adapters and for the
protocol test suite: it can answer with a fixed vector, derive a
deterministic vector from the text, add artificial latency, or
deliberately emit garbage.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time


def hash_probs(text: str, classes: int) -> list[float]:
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    weights = [1 + digest[i] for i in range(classes)]
    total = sum(weights)
    return [w / total for w in weights]


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--classes", type=int, default=2)
    parser.add_argument("--probs", help="comma-separated fixed probability vector")
    parser.add_argument("--mode", choices=["fixed", "hash"], default="fixed")
    parser.add_argument("--delay", type=float, default=0.0, help="seconds to sleep before each prediction")
    parser.add_argument("--malformed", action="store_true", help="answer predictions with invalid JSON")
    args = parser.parse_args(argv)

    if args.probs:
        fixed = [float(p) for p in args.probs.split(",")]
    else:
        fixed = [1.0 / args.classes] * args.classes

    out = sys.stdout
    for line in sys.stdin:
        if not line.strip():
            continue
        msg = json.loads(line)
        if msg.get("op") == "hello":
            out.write(json.dumps({"op": "hello", "classes": args.classes}) + "\n")
        elif msg.get("op") == "predict":
            if args.delay:
                time.sleep(args.delay)
            if args.malformed:
                out.write("this is not json\n")
            else:
                probs = hash_probs(msg["text"], args.classes) if args.mode == "hash" else fixed
                out.write(json.dumps({"op": "prediction", "id": msg["id"], "probs": probs}) + "\n")
        else:
            out.write(json.dumps({"op": "error", "message": f"unknown op {msg.get('op')!r}"}) + "\n")
        out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
