"""Victim classifiers behind a black-box probability oracle.

Two oracle kinds share the same surface: an in-process multinomial
logistic regression over char 1-3-gram and word-unigram counts, and an
adapter that talks to an external classifier process over a JSON-lines
stdio protocol. Attack code only ever sees ``predict(text) -> probs``.
"""

from __future__ import annotations

import json
import queue
import subprocess
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .corpus import Dataset, normalize

PROB_SUM_TOL = 1e-6
EXTERNAL_PROB_SUM_TOL = 1e-4
MODEL_SCHEMA = 1


class OracleError(RuntimeError):
    pass


class OracleTransportError(OracleError):
    """The external process died, went silent, or timed out."""


class OracleProtocolError(OracleError):
    """The external process answered, but not with a valid response."""


class Oracle(Protocol):
    """The whole black-box contract: a class count and a probability query."""

    num_classes: int

    def predict(self, text: str) -> np.ndarray: ...


def check_probs(probs: Sequence[float], num_classes: int, tol: float = PROB_SUM_TOL) -> np.ndarray:
    vec = np.asarray(probs, dtype=np.float64)
    if vec.shape != (num_classes,):
        raise OracleProtocolError(f"expected {num_classes} probabilities, got shape {vec.shape}")
    if not np.all(np.isfinite(vec)) or np.any(vec < 0.0) or np.any(vec > 1.0):
        raise OracleProtocolError(f"probabilities outside [0, 1]: {vec.tolist()}")
    if abs(float(vec.sum()) - 1.0) > tol:
        raise OracleProtocolError(f"probabilities sum to {float(vec.sum())!r}, not 1")
    return vec


def featurize(text: str) -> dict[str, float]:
    """Char 1-3-gram plus word-unigram counts of the normalized text."""
    counts: dict[str, float] = {}
    for token in normalize(text).split():
        counts[f"w={token}"] = counts.get(f"w={token}", 0.0) + 1.0
        for n in (1, 2, 3):
            for i in range(len(token) - n + 1):
                key = f"c={token[i:i + n]}"
                counts[key] = counts.get(key, 0.0) + 1.0
    return counts


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.1
    epochs: int = 30
    l2: float = 1e-4


def _softmax(z: np.ndarray) -> np.ndarray:
    shifted = z - z.max()
    e = np.exp(shifted)
    return e / e.sum()


class BaselineModel:
    """Linear softmax classifier with a frozen feature map."""

    def __init__(
        self,
        feature_index: dict[str, int],
        weights: np.ndarray,
        bias: np.ndarray,
        class_names: tuple[str, ...],
        seed: int,
        train_config: TrainConfig,
    ):
        self.feature_index = feature_index
        self.weights = weights
        self.bias = bias
        self.class_names = class_names
        self.seed = seed
        self.train_config = train_config

    @property
    def num_classes(self) -> int:
        return len(self.class_names)

    def _vectorize(self, text: str) -> tuple[np.ndarray, np.ndarray]:
        idx, vals = [], []
        for feat, count in featurize(text).items():
            col = self.feature_index.get(feat)
            if col is not None:
                idx.append(col)
                vals.append(count)
        return np.asarray(idx, dtype=np.intp), np.asarray(vals, dtype=np.float64)

    def predict_probs(self, text: str) -> np.ndarray:
        idx, vals = self._vectorize(text)
        z = self.weights[:, idx] @ vals + self.bias if idx.size else self.bias.copy()
        return _softmax(z)

    def save(self, path: str | Path) -> None:
        payload = {
            "schema": MODEL_SCHEMA,
            "kind": "baseline",
            "class_names": list(self.class_names),
            "feature_index": self.feature_index,
            "weights": self.weights.tolist(),
            "bias": self.bias.tolist(),
            "seed": self.seed,
            "train_config": {
                "learning_rate": self.train_config.learning_rate,
                "epochs": self.train_config.epochs,
                "l2": self.train_config.l2,
            },
        }
        Path(path).write_text(json.dumps(payload, sort_keys=True, ensure_ascii=False), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "BaselineModel":
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
        if payload.get("kind") != "baseline" or payload.get("schema") != MODEL_SCHEMA:
            raise ValueError(f"{path}: not a baseline model file")
        cfg = payload["train_config"]
        return cls(
            feature_index=payload["feature_index"],
            weights=np.asarray(payload["weights"], dtype=np.float64),
            bias=np.asarray(payload["bias"], dtype=np.float64),
            class_names=tuple(payload["class_names"]),
            seed=payload["seed"],
            train_config=TrainConfig(cfg["learning_rate"], cfg["epochs"], cfg["l2"]),
        )


def train_baseline(train: Dataset, config: TrainConfig | None = None, seed: int = 0) -> BaselineModel:
    """Train the baseline by seeded per-example SGD.

    The feature map is built from the training set in first-seen order
    and frozen; identical seed and data give bit-identical weights.
    """
    config = config or TrainConfig()
    labels = [ex.label for ex in train.examples]
    if len(set(labels)) < 2:
        raise ValueError("cannot train on a single-class dataset")

    feature_index: dict[str, int] = {}
    docs = []
    for ex in train.examples:
        idx, vals = [], []
        for feat, count in featurize(ex.text).items():
            col = feature_index.setdefault(feat, len(feature_index))
            idx.append(col)
            vals.append(count)
        docs.append((np.asarray(idx, dtype=np.intp), np.asarray(vals, dtype=np.float64)))

    num_classes = train.num_classes
    dim = len(feature_index)
    weights = np.zeros((num_classes, dim), dtype=np.float64)
    bias = np.zeros(num_classes, dtype=np.float64)
    rng = np.random.default_rng(seed)
    lr = config.learning_rate

    for _ in range(config.epochs):
        for i in rng.permutation(len(docs)):
            idx, vals = docs[i]
            z = weights[:, idx] @ vals + bias
            grad = _softmax(z)
            grad[labels[i]] -= 1.0
            weights *= 1.0 - lr * config.l2
            weights[:, idx] -= lr * np.outer(grad, vals)
            bias -= lr * grad

    return BaselineModel(feature_index, weights, bias, train.class_names, seed, config)


class InProcessOracle:
    """Oracle over a trained baseline; predictions are pure, only the
    call counter mutates."""

    def __init__(self, model: BaselineModel):
        self.model = model
        self.num_classes = model.num_classes
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def calls(self) -> int:
        return self._calls

    def predict(self, text: str) -> np.ndarray:
        probs = check_probs(self.model.predict_probs(text), self.num_classes)
        with self._lock:
            self._calls += 1
        return probs


class ExternalOracle:
    """Adapter speaking JSON-lines to a classifier child process.

    One request is in flight at a time and responses must arrive in
    request order; vectors off by more than ``EXTERNAL_PROB_SUM_TOL``
    from summing to 1 are rejected rather than silently repaired.
    """

    def __init__(self, proc: subprocess.Popen, num_classes: int, timeout: float):
        self._proc = proc
        self.num_classes = num_classes
        self.timeout = timeout
        self._calls = 0
        self._seq = 0
        self._lock = threading.Lock()
        self._lines: queue.Queue = queue.Queue()
        self._reader = threading.Thread(target=self._pump, daemon=True)
        self._reader.start()

    @property
    def calls(self) -> int:
        return self._calls

    def _pump(self):
        try:
            for line in self._proc.stdout:
                self._lines.put(line)
        finally:
            self._lines.put(None)

    def _send(self, obj: dict) -> None:
        try:
            self._proc.stdin.write(json.dumps(obj, ensure_ascii=False) + "\n")
            self._proc.stdin.flush()
        except (BrokenPipeError, OSError, ValueError) as exc:
            raise OracleTransportError(f"adapter process not accepting requests: {exc}") from exc

    def _recv(self) -> dict:
        try:
            line = self._lines.get(timeout=self.timeout)
        except queue.Empty:
            raise OracleTransportError(f"no response within {self.timeout}s") from None
        if line is None:
            raise OracleTransportError("adapter process closed its output")
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            raise OracleProtocolError(f"response is not valid JSON: {line!r}") from exc
        if not isinstance(msg, dict):
            raise OracleProtocolError(f"response is not a JSON object: {line!r}")
        return msg

    def handshake(self) -> None:
        self._send({"op": "hello"})
        reply = self._recv()
        if reply.get("op") != "hello" or "classes" not in reply:
            raise OracleProtocolError(f"bad handshake reply: {reply!r}")
        if reply["classes"] != self.num_classes:
            raise OracleProtocolError(
                f"adapter serves {reply['classes']} classes, expected {self.num_classes}"
            )

    def predict(self, text: str) -> np.ndarray:
        with self._lock:
            self._seq += 1
            req_id = str(self._seq)
            self._send({"op": "predict", "id": req_id, "text": text})
            msg = self._recv()
            if msg.get("op") != "prediction" or "probs" not in msg:
                raise OracleProtocolError(f"bad prediction response: {msg!r}")
            if msg.get("id") != req_id:
                raise OracleProtocolError(f"out-of-order response id {msg.get('id')!r}, expected {req_id!r}")
            probs = check_probs(msg["probs"], self.num_classes, tol=EXTERNAL_PROB_SUM_TOL)
            self._calls += 1
            return probs

    def close(self) -> None:
        for stream in (self._proc.stdin,):
            try:
                stream.close()
            except OSError:
                pass
        try:
            self._proc.wait(timeout=2.0)
        except subprocess.TimeoutExpired:
            self._proc.kill()
            self._proc.wait()

    def __enter__(self) -> "ExternalOracle":
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def open_external(cmd: Sequence[str], num_classes: int, timeout: float = 30.0) -> ExternalOracle:
    """Spawn an adapter process and complete the hello handshake."""
    proc = subprocess.Popen(
        list(cmd),
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        text=True,
        encoding="utf-8",
        bufsize=1,
    )
    oracle = ExternalOracle(proc, num_classes, timeout)
    try:
        oracle.handshake()
    except OracleError:
        oracle.close()
        raise
    return oracle
