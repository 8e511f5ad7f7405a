"""Throughput estimators shared by the logics."""

from __future__ import annotations

import math
from typing import Sequence


def dashjs_estimate(prev_estimate: float, last_measured: float,
                    w1: float = 0.7, w2: float = 1.3) -> float:
    """Weighted blend of the previous estimate and the newest measurement."""
    return (w1 * prev_estimate + w2 * last_measured) / (w1 + w2)


def harmonic_mean(samples: Sequence[float]) -> float:
    if len(samples) == 0:
        raise ValueError("harmonic_mean of an empty sample list")
    if any(s <= 0 for s in samples):
        raise ValueError("harmonic_mean needs positive samples")
    return len(samples) / math.fsum(1.0 / s for s in samples)


def drop_reactive_weight(recent: float, reference: float, step: float = 0.3,
                         max_doublings: int = 40) -> float:
    """Weight for the newest sample in a sliding average.

    The weight doubles for every `step` of deviation, measured relative to
    the newest sample itself. A drop to a fraction of the reference yields a
    large deviation and so swamps the older samples; a rise can deviate by
    less than 1.0 and therefore gets at most a few doublings.
    """
    deviation = abs(recent - reference) / recent
    doublings = min(int(math.floor(deviation / step + 1e-12)), max_doublings)
    return float(2 ** doublings)


def sliding_average(samples: Sequence[float], window: int = 5, step: float = 0.3) -> float:
    """Drop-reactive weighted average of the last `window` samples.

    Older samples get weight 1; the newest gets :func:`drop_reactive_weight`
    against the plain mean of the older ones.
    """
    if len(samples) == 0:
        raise ValueError("sliding_average of an empty sample list")
    recent = list(samples[-window:])
    if len(recent) == 1:
        return recent[0]
    older, newest = recent[:-1], recent[-1]
    reference = math.fsum(older) / len(older)
    w = drop_reactive_weight(newest, reference, step)
    return (math.fsum(older) + w * newest) / (len(older) + w)
