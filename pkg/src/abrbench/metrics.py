"""Session metrics: inefficiency, instability, throughput, buffer, stalls, switches."""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from dataclasses import dataclass, fields, astuple
from typing import Sequence

import numpy as np

from .engine import SegmentRecord, SessionLog, startup_delay


@dataclass(frozen=True)
class SummaryReport:
    logic_name: str
    segment_duration: float
    inefficiency: float
    inefficiency_sum: float
    instability: float
    media_throughput: float
    measured_throughput: float
    avg_buffer: float
    startup_delay: float
    stall_count: float
    stall_total: float
    switch_count: float
    switch_amplitude_mean: float
    switch_amplitude_kbps: float

    @classmethod
    def columns(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def inefficiency_terms(segments: Sequence[SegmentRecord]) -> np.ndarray:
    if len(segments) == 0:
        raise ValueError("inefficiency needs at least one segment")
    b = np.array([s.bitrate for s in segments], dtype=float)
    w = np.array([s.measured_throughput for s in segments], dtype=float)
    if np.any(w <= 0):
        raise ValueError("observed throughput must be positive")
    return np.abs(b - w) / w


def _gap_total(segments: Sequence[SegmentRecord]) -> Fraction:
    # Summed in exact rationals so the result is the correctly rounded value.
    inefficiency_terms(segments)  # validation
    total = Fraction(0)
    for s in segments:
        b, w = Fraction(float(s.bitrate)), Fraction(float(s.measured_throughput))
        total += abs(b - w) / w
    return total


def inefficiency(segments: Sequence[SegmentRecord]) -> float:
    """Mean relative gap between selected bitrate and observed throughput."""
    return float(_gap_total(segments) / len(segments))


def inefficiency_sum(segments: Sequence[SegmentRecord]) -> float:
    """The same gap summed over segments (grows with session length)."""
    return float(_gap_total(segments))


def bitrate_series(segments: Sequence[SegmentRecord], segment_duration: float,
                   step: float = 1.0) -> np.ndarray:
    """Selected bitrate sampled every `step` seconds of media time, each
    segment's bitrate held over its playback interval."""
    total = len(segments) * segment_duration
    t = np.arange(0.0, total - 1e-9, step)
    idx = np.minimum((t / segment_duration + 1e-9).astype(int), len(segments) - 1)
    rates = np.array([s.bitrate for s in segments], dtype=float)
    return rates[idx]


def instability_series(series, k: int = 20) -> np.ndarray:
    """Per-time instability values for every t in [k, len(series) - 1]."""
    b = np.asarray(series, dtype=float)
    if k < 2:
        raise ValueError("window k must be at least 2")
    if len(b) < k + 1:
        raise ValueError(f"series of length {len(b)} is shorter than k+1={k + 1}")
    # numerator weights k-d for d = 0..k-1, applied to |b[t-d] - b[t-d-1]|
    num = np.convolve(np.abs(np.diff(b)), np.arange(k, 0, -1, dtype=float), mode="valid")
    # denominator weights k-d for d = 1..k; slot d=0 is unused
    den_w = np.concatenate(([0.0], np.arange(k - 1, -1, -1, dtype=float)))
    den = np.convolve(b, den_w, mode="valid")
    return num / den


def instability(series, k: int = 20) -> float:
    return float(np.mean(instability_series(series, k)))


def media_throughput(segments: Sequence[SegmentRecord]) -> float:
    if len(segments) == 0:
        raise ValueError("media_throughput needs at least one segment")
    return float(np.mean([s.bitrate for s in segments]))


def avg_buffer(log: SessionLog) -> float:
    """Time-weighted mean of the buffer trajectory from playback start to
    session end. The trajectory is linear between logged events."""
    t0, t1 = log.playback_start, log.session_end
    if t1 <= t0:
        return 0.0
    samples = [(t, b) for t, b in log.buffer_samples if t0 <= t <= t1]
    return trajectory_mean(samples, t0, t1)


def trajectory_mean(samples: Sequence[tuple[float, float]], t0: float, t1: float) -> float:
    if t1 <= t0 or len(samples) < 2:
        return samples[0][1] if samples else 0.0
    t = np.array([s[0] for s in samples], dtype=float)
    b = np.array([s[1] for s in samples], dtype=float)
    area = float(np.sum(0.5 * (b[1:] + b[:-1]) * np.diff(t)))
    return area / (t1 - t0)


def buffer_at(log: SessionLog, times) -> np.ndarray:
    """Buffer level at arbitrary wall-clock times (post-jump at arrivals)."""
    t = np.array([s[0] for s in log.buffer_samples], dtype=float)
    b = np.array([s[1] for s in log.buffer_samples], dtype=float)
    q = np.atleast_1d(np.asarray(times, dtype=float))
    k = np.clip(np.searchsorted(t, q, side="right") - 1, 0, len(t) - 1)
    nxt = np.minimum(k + 1, len(t) - 1)
    span = t[nxt] - t[k]
    frac = np.where(span > 0, (q - t[k]) / np.where(span > 0, span, 1.0), 0.0)
    frac = np.clip(frac, 0.0, 1.0)
    return b[k] + (b[nxt] - b[k]) * frac


def switch_stats(segments: Sequence[SegmentRecord]) -> tuple[int, float, float]:
    """(switch count, mean amplitude in ladder steps, mean amplitude in kbps)."""
    if len(segments) == 0:
        raise ValueError("switch_stats needs at least one segment")
    reps = np.array([s.rep for s in segments])
    rates = np.array([s.bitrate for s in segments], dtype=float)
    steps = np.abs(np.diff(reps))
    mask = steps > 0
    count = int(np.count_nonzero(mask))
    if count == 0:
        return 0, 0.0, 0.0
    return count, float(steps[mask].mean()), float(np.abs(np.diff(rates))[mask].mean())


def summarize(log: SessionLog, k: int = 20) -> SummaryReport:
    segs = log.segments
    count, amp, amp_kbps = switch_stats(segs)
    series = bitrate_series(segs, log.config.segment_duration)
    return SummaryReport(
        logic_name=log.logic_name,
        segment_duration=log.config.segment_duration,
        inefficiency=inefficiency(segs),
        inefficiency_sum=inefficiency_sum(segs),
        instability=instability(series, k),
        media_throughput=media_throughput(segs),
        measured_throughput=float(np.mean([s.measured_throughput for s in segs])),
        avg_buffer=avg_buffer(log),
        startup_delay=startup_delay(log),
        stall_count=len(log.stalls),
        stall_total=float(sum(s.duration for s in log.stalls)),
        switch_count=count,
        switch_amplitude_mean=amp,
        switch_amplitude_kbps=amp_kbps,
    )


def mean_report(reports: Sequence[SummaryReport]) -> SummaryReport:
    """Field-wise mean over repeated runs of the same (logic, duration)."""
    if not reports:
        raise ValueError("no reports to average")
    first = reports[0]
    values = {}
    for f in fields(SummaryReport):
        if f.name in ("logic_name", "segment_duration"):
            values[f.name] = getattr(first, f.name)
        else:
            values[f.name] = float(np.mean([getattr(r, f.name) for r in reports]))
    return SummaryReport(**values)


def format_report_csv(reports: Sequence[SummaryReport]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(SummaryReport.columns())
    for r in reports:
        writer.writerow([_cell(v) for v in astuple(r)])
    return out.getvalue()


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}".rstrip("0").rstrip(".") if v == v else "nan"
    return str(v)
