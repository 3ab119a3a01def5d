"""Compensated summation helpers.

All reductions in the package go through these so that results do not
depend on how work was chunked.
"""
from __future__ import annotations

import math

import numpy as np


class KahanAccumulator:
    """Elementwise Neumaier accumulator over arrays of a fixed shape."""

    def __init__(self, shape):
        self.total = np.zeros(shape)
        self.comp = np.zeros(shape)

    def add(self, values, where=None):
        if where is not None:
            values = np.where(where, values, 0.0)
        s = self.total + values
        big = np.abs(self.total) >= np.abs(values)
        self.comp += np.where(big, (self.total - s) + values, (values - s) + self.total)
        self.total = s

    def result(self):
        return self.total + self.comp


def fsum(values) -> float:
    """Correctly rounded sum (order independent)."""
    return math.fsum(np.asarray(values, dtype=float).ravel().tolist())


def compensated_cumsum(values) -> np.ndarray:
    """Prefix sums with Neumaier compensation; out[i] = sum(values[:i+1])."""
    vals = np.asarray(values, dtype=float).ravel().tolist()
    out = np.empty(len(vals))
    s = 0.0
    c = 0.0
    for i, v in enumerate(vals):
        t = s + v
        if abs(s) >= abs(v):
            c += (s - t) + v
        else:
            c += (v - t) + s
        s = t
        out[i] = s + c
    return out
