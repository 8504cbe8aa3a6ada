"""Test doubles for the probability oracle."""

from __future__ import annotations

import numpy as np


class ScriptedOracle:
    """Table-driven oracle: exact text -> probability vector, with a
    default for anything unscripted. Records every query."""

    def __init__(self, num_classes, table=None, default=None):
        self.num_classes = num_classes
        self.table = dict(table or {})
        self.default = default if default is not None else [1.0 / num_classes] * num_classes
        self.calls = 0
        self.queries: list[str] = []

    def predict(self, text: str) -> np.ndarray:
        self.calls += 1
        self.queries.append(text)
        return np.asarray(self.table.get(text, self.default), dtype=np.float64)


class FlakyOracle(ScriptedOracle):
    """Raises after a fixed number of calls; for error-path tests."""

    def __init__(self, num_classes, fail_after, **kwargs):
        super().__init__(num_classes, **kwargs)
        self.fail_after = fail_after

    def predict(self, text: str) -> np.ndarray:
        if self.calls >= self.fail_after:
            raise RuntimeError("oracle went away")
        return super().predict(text)
