"""Reference bandwidth trajectory with staircases and abrupt drops.

The generator works in relative levels first and then fits a single scale
factor so that the time-average hits ``target_mean``; levels are floored at
``floor`` during the fit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import BandwidthTrace

REFERENCE_DURATION = 700.0
REFERENCE_MEAN = 1269.53
REFERENCE_DROPS = (350.0, 600.0)
REFERENCE_FLOOR = 150.0
REFERENCE_SEED = 0


class TraceGenerationError(ValueError):
    pass


@dataclass(frozen=True)
class TraceShape:
    step_count: tuple[int, int] = (3, 5)   # staircase steps per span, inclusive range
    step_spread: float = 0.4               # relative change per staircase step
    drop_depth: float = 0.2                # drop level / level before the drop
    drop_hold: tuple[float, float] = (20.0, 35.0)


def generate_trace(duration: float = REFERENCE_DURATION, target_mean: float = REFERENCE_MEAN,
                   drops: Sequence[float] = REFERENCE_DROPS, seed: int = REFERENCE_SEED,
                   floor: float = REFERENCE_FLOOR, steps: int | None = None,
                   shape: TraceShape = TraceShape(), tolerance: float = 0.01) -> BandwidthTrace:
    """Build a piecewise-constant trace.

    The timeline is split at the drop times. Each span is a staircase that
    climbs for its first half of steps and descends for the rest; a span
    that starts at a drop first holds a low level (``drop_depth`` of the
    preceding level) and then jumps back.
    ``steps=1`` with no drops gives a constant trace at ``target_mean``.
    """
    if not duration > 0:
        raise TraceGenerationError("duration must be positive")
    if not target_mean > 0:
        raise TraceGenerationError("target_mean must be positive")
    drops = sorted(float(d) for d in drops)
    for d in drops:
        if not 0 < d < duration:
            raise TraceGenerationError(f"drop time {d:g} outside (0, {duration:g})")
    if target_mean < floor:
        raise TraceGenerationError(f"target_mean {target_mean:g} is below the floor {floor:g}")

    rng = np.random.default_rng(seed)
    starts, rel = _relative_shape(duration, drops, rng, steps, shape)
    edges = np.append(starts, duration)
    widths = np.diff(edges)

    def mean_for(scale: float) -> float:
        return float(np.sum(np.maximum(rel * scale, floor) * widths) / duration)

    lo, hi = 0.0, 1.0
    while mean_for(hi) < target_mean:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mean_for(mid) < target_mean:
            lo = mid
        else:
            hi = mid
    levels = np.round(np.maximum(rel * hi, floor), 2)
    trace = BandwidthTrace(tuple(zip(starts.tolist(), levels.tolist())), duration)
    check_mean(trace, target_mean, tolerance)
    return trace


def check_mean(trace: BandwidthTrace, target_mean: float, tolerance: float = 0.01) -> float:
    """Re-integrate `trace` and require its mean within `tolerance` (relative)."""
    mean = trace.mean()
    if abs(mean - target_mean) > tolerance * target_mean:
        raise TraceGenerationError(
            f"trace mean {mean:.2f} kbps misses target {target_mean:.2f} by more than {tolerance:.0%}")
    return mean


def reference_trace() -> BandwidthTrace:
    return generate_trace()


def _relative_shape(duration, drops, rng, steps, shape):
    bounds = [0.0] + list(drops) + [duration]
    starts, rel = [], []
    level = 1.0
    for k, (a, b) in enumerate(zip(bounds, bounds[1:])):
        t = a
        if k > 0:
            # abrupt drop, then an abrupt return to the level held before it
            hold = min(rng.uniform(*shape.drop_hold), 0.5 * (b - a))
            starts.append(t)
            rel.append(level * shape.drop_depth)
            t += hold
        n = steps if steps is not None else int(rng.integers(shape.step_count[0], shape.step_count[1] + 1))
        cuts = (np.arange(1, n) + rng.uniform(-0.3, 0.3, size=n - 1)) / n
        n_up = (n + 1) // 2
        for j, s in enumerate([t] + [t + c * (b - t) for c in cuts]):
            if j > 0:
                factor = 1.0 + shape.step_spread * rng.uniform(0.6, 1.0)
                level = level * factor if j < n_up else level / factor
            starts.append(s)
            rel.append(level)
    # interior cut points get millisecond resolution; drop instants stay exact
    exact = set(bounds[:-1])
    starts = np.array([x if x in exact else round(x, 3) for x in starts])
    return starts, np.array(rel)
