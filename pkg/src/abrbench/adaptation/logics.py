"""The ten adaptation logics.

Each class keeps its tunables in a ``Params`` dataclass; the defaults form
the parameter table used by the benchmark and may be overridden per logic
(see :func:`abrbench.adaptation.make_logic`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..model import index_for_bandwidth
from .base import AdaptationContext, AdaptationLogic, Decision
from .estimators import dashjs_estimate, harmonic_mean, sliding_average


class DashJS(AdaptationLogic):
    """Weighted moving estimate seeded by the MPD download throughput."""

    name = "dashjs"

    @dataclass(frozen=True)
    class Params:
        w1: float = 0.7
        w2: float = 1.3

    def _init_state(self):
        self.estimate = None

    def decide(self, ctx: AdaptationContext) -> Decision:
        if ctx.segment_index == 0 or self.estimate is None:
            self.estimate = ctx.mpd_throughput
        else:
            self.estimate = dashjs_estimate(self.estimate, ctx.last_throughput,
                                            self.params.w1, self.params.w2)
        return Decision(index_for_bandwidth(ctx.ladder, self.estimate))


class Festive(AdaptationLogic):
    """Harmonic-mean estimate, one-step switches, delayed up-switching and a
    randomized request schedule around a target buffer."""

    name = "festive"

    @dataclass(frozen=True)
    class Params:
        window: int = 20
        efficiency_factor: float = 0.85
        target_buffer: float = 30.0
        jitter: float = 0.5  # fraction of a segment, each side

    def _init_state(self):
        self.up_count = 0

    def _schedule(self, ctx: AdaptationContext) -> float:
        # Draw on every call so the RNG stream depends only on the call count.
        offset = self.rng.uniform(-self.params.jitter, self.params.jitter) * ctx.segment_duration
        excess = ctx.buffer_level - self.params.target_buffer
        if excess <= 0:
            return ctx.now
        return max(ctx.now, ctx.now + excess + offset)

    def decide(self, ctx: AdaptationContext) -> Decision:
        not_before = self._schedule(ctx)
        if ctx.segment_index == 0:
            return Decision(1, not_before=not_before)
        cur = ctx.current_rep
        h = harmonic_mean(ctx.throughputs(self.params.window))
        target = index_for_bandwidth(ctx.ladder, self.params.efficiency_factor * h)
        rep = cur
        if target > cur:
            self.up_count += 1
            if self.up_count >= cur:
                rep = cur + 1
                self.up_count = 0
        else:
            self.up_count = 0
            if target < cur:
                rep = cur - 1
        return Decision(ctx.ladder.clamp(rep), not_before=not_before)


class Instant(AdaptationLogic):
    """Highest representation below the last measured throughput."""

    name = "instant"

    def decide(self, ctx: AdaptationContext) -> Decision:
        return Decision(index_for_bandwidth(ctx.ladder, ctx.last_throughput))


class Liu(AdaptationLogic):
    """AIMD on the ratio of segment duration to fetch time: step up by one,
    drop straight to the measured rate, hold in between."""

    name = "liu"

    @dataclass(frozen=True)
    class Params:
        epsilon: float = 0.2
        gamma_d: float = 0.67

    def decide(self, ctx: AdaptationContext) -> Decision:
        if ctx.segment_index == 0:
            return Decision(1)
        cur = ctx.current_rep
        mu = ctx.segment_duration / ctx.history[-1].fetch_time
        if mu > 1 + self.params.epsilon:
            return Decision(ctx.ladder.clamp(cur + 1))
        if mu < self.params.gamma_d:
            return Decision(index_for_bandwidth(ctx.ladder, ctx.last_throughput))
        return Decision(cur)


class Miller(AdaptationLogic):
    """Buffer-driven logic with a fast-start ramp and watermark thresholds.

    ``b_min`` defaults to two segments. Requests are held back while the
    buffer is above ``b_max`` until it drains to ``0.5 * (b_low + b_max)``.
    """

    name = "miller"

    @dataclass(frozen=True)
    class Params:
        b_min: float | None = None
        b_low: float = 20.0
        b_max: float = 50.0
        up_margin: float = 0.75  # step up only while up_margin * throughput clears the next bitrate

    def _init_state(self):
        self.fast_start = True
        self.prev_buffer = None

    def thresholds(self, segment_duration: float) -> tuple[float, float, float, float]:
        p = self.params
        b_min = 2 * segment_duration if p.b_min is None else p.b_min
        return b_min, p.b_low, p.b_max, 0.5 * (p.b_low + p.b_max)

    def decide(self, ctx: AdaptationContext) -> Decision:
        b_min, b_low, b_max, b_opt = self.thresholds(ctx.segment_duration)
        rep = self._choose(ctx, b_min, b_low)
        self.prev_buffer = ctx.buffer_level
        return Decision(ctx.ladder.clamp(rep), max_buffer=b_max, drain_to=b_opt)

    def _choose(self, ctx: AdaptationContext, b_min: float, b_low: float) -> int:
        if ctx.segment_index == 0:
            return 1
        ladder, cur, w = ctx.ladder, ctx.current_rep, ctx.last_throughput
        buf = ctx.buffer_level
        can_step_up = cur < len(ladder) and self.params.up_margin * w > ladder.bitrate(cur + 1)
        if self.fast_start and buf >= b_low:
            self.fast_start = False
        if self.fast_start:
            if can_step_up:
                return cur + 1
            if w < ladder.bitrate(cur) and cur > 1:
                self.fast_start = False
                return cur - 1
            return cur
        if buf < b_min:
            return 1
        if buf < b_low and ladder.bitrate(cur) > w:
            return cur - 1
        rising = self.prev_buffer is not None and buf > self.prev_buffer
        if rising and can_step_up:
            return cur + 1
        return cur


class OSMF(AdaptationLogic):
    """Scales the current bitrate by segment duration over download time and
    jumps straight to the matching representation.

    The download time is the payload transfer time (first to last byte) by
    default; set ``include_latency`` to time the whole request instead.
    """

    name = "osmf"

    @dataclass(frozen=True)
    class Params:
        include_latency: bool = False

    def decide(self, ctx: AdaptationContext) -> Decision:
        if ctx.segment_index == 0:
            return Decision(1)
        last = ctx.history[-1]
        elapsed = last.fetch_time if self.params.include_latency else last.transfer_duration
        factor = ctx.segment_duration / elapsed
        target = ctx.ladder.bitrate(ctx.current_rep) * factor
        return Decision(index_for_bandwidth(ctx.ladder, target))


class Panda(AdaptationLogic):
    """Probe-and-adapt: grow the target rate additively while the link keeps
    up, fall back to the measured rate otherwise."""

    name = "panda"

    @dataclass(frozen=True)
    class Params:
        kappa: float = 100.0  # kbps per second of media
        safety: float = 0.9
        cap_at_measured: bool = True  # never request above the last measured rate

    def _init_state(self):
        self.target_rate = None

    def probe_increment(self, segment_duration: float) -> float:
        return 0.5 * segment_duration * self.params.kappa

    def decide(self, ctx: AdaptationContext) -> Decision:
        if ctx.segment_index == 0 or self.target_rate is None:
            self.target_rate = ctx.ladder.bitrate(1)
            return Decision(1)
        w = ctx.last_throughput
        if w >= self.target_rate:
            self.target_rate += self.probe_increment(ctx.segment_duration)
        else:
            self.target_rate = w
        rate = self.params.safety * self.target_rate
        if self.params.cap_at_measured:
            rate = min(rate, w)
        return Decision(index_for_bandwidth(ctx.ladder, rate))


class QDash(AdaptationLogic):
    """Instant-style target, but large downward moves pass through the
    midpoint representation first."""

    name = "qdash"

    def decide(self, ctx: AdaptationContext) -> Decision:
        target = index_for_bandwidth(ctx.ladder, ctx.last_throughput)
        if ctx.segment_index == 0:
            return Decision(target)
        cur = ctx.current_rep
        if target >= cur - 1:
            return Decision(target)
        return Decision(math.ceil((cur + target) / 2))


class Thang(AdaptationLogic):
    """Drop-reactive sliding average; always opens at the lowest level."""

    name = "thang"

    @dataclass(frozen=True)
    class Params:
        window: int = 5
        deviation_step: float = 0.3
        safety: float = 0.8

    def estimate(self, ctx: AdaptationContext) -> float:
        return sliding_average(ctx.throughputs(self.params.window),
                               self.params.window, self.params.deviation_step)

    def decide(self, ctx: AdaptationContext) -> Decision:
        if ctx.segment_index == 0:
            return Decision(1)
        return Decision(index_for_bandwidth(ctx.ladder, self.params.safety * self.estimate(ctx)))


class TianLiu(AdaptationLogic):
    """Buffer-scaled throughput target with an Instant-like panic mode."""

    name = "tianliu"

    @dataclass(frozen=True)
    class Params:
        b_target: float = 20.0
        panic_ratio: float = 0.5

    def decide(self, ctx: AdaptationContext) -> Decision:
        w = ctx.last_throughput
        if ctx.segment_index == 0:
            return Decision(index_for_bandwidth(ctx.ladder, w))
        if w < self.params.panic_ratio * ctx.ladder.bitrate(ctx.current_rep):
            return Decision(index_for_bandwidth(ctx.ladder, w))
        fill = min(ctx.buffer_level / self.params.b_target, 1.0)
        return Decision(index_for_bandwidth(ctx.ladder, w * (0.5 + 0.5 * fill)))
