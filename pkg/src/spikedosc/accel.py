"""Summation helpers for slowly convergent and oscillatory sequences."""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

__all__ = ["window_weights", "cesaro_window_mean", "wynn_epsilon"]

WINDOW_FRACTION = 0.25
WINDOW_POWER = 4


def window_weights(length: int, power: int = WINDOW_POWER) -> np.ndarray:
    """Normalised sin^(2*power) bump on ``length`` equally spaced interior points.

    ``power=0`` gives the flat (plain Cesaro) window.
    """
    if length < 1:
        raise ValueError("window length must be positive")
    if power == 0:
        return np.full(length, 1.0 / length)
    t = np.arange(1, length + 1) / (length + 1)
    w = np.sin(np.pi * t) ** (2 * power)
    return w / w.sum()


def cesaro_window_mean(partial_sums: Sequence[float], fraction: float = WINDOW_FRACTION,
                       power: int = WINDOW_POWER) -> float:
    """Weighted mean of the last ``ceil(fraction * N)`` partial sums.

    A smooth bump (``power >= 1``) suppresses the residual oscillation of the
    partial sums far faster than flat averaging: the bump's spectrum decays
    like (number of oscillations in the window)^-(2*power+1).
    """
    s = np.asarray(partial_sums, dtype=float)
    n = len(s)
    if n == 0:
        raise ValueError("no partial sums")
    length = max(1, math.ceil(fraction * n))
    return float(window_weights(length, power) @ s[n - length:])


def wynn_epsilon(seq: Sequence[float]) -> tuple[float, float]:
    """Extrapolate a sequence of partial sums with Wynn's epsilon algorithm.

    Returns ``(estimate, error)`` where the estimate is taken from the even
    column whose last two entries agree best, and ``error`` is that
    disagreement.
    """
    s = [float(v) for v in seq]
    n = len(s)
    if n == 0:
        raise ValueError("empty sequence")
    if n == 1:
        return s[0], math.inf
    best, best_err = s[-1], abs(s[-1] - s[-2])
    prev = [0.0] * (n + 1)
    cur = s
    for k in range(1, n):
        nxt = []
        for j in range(len(cur) - 1):
            d = cur[j + 1] - cur[j]
            if d == 0.0:
                return best, best_err
            step = 1.0 / d
            if not math.isfinite(step):
                return best, best_err
            nxt.append(prev[j + 1] + step)
        prev, cur = cur, nxt
        if k % 2 == 0 and len(cur) >= 2:
            err = abs(cur[-1] - cur[-2])
            if err < best_err:
                best, best_err = cur[-1], err
        if len(cur) < 2:
            break
    return best, best_err
