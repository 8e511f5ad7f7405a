"""Simulated shaped link: closed-form transfers over a bandwidth trace."""

from __future__ import annotations

import bisect
import hashlib
from dataclasses import dataclass

from .model import BandwidthTrace, format_trace, _num


@dataclass(frozen=True)
class Link:
    trace: BandwidthTrace
    request_latency: float = 0.160

    def __post_init__(self):
        if self.request_latency < 0:
            raise ValueError("request_latency must be non-negative")


@dataclass(frozen=True)
class DownloadRecord:
    """One HTTP GET as seen by the client.

    ``first_byte_time`` is when payload starts flowing (request time plus
    latency). ``measured_throughput`` is size over the whole request wall
    time, latency included.
    """

    request_time: float
    complete_time: float
    size: float
    measured_throughput: float
    first_byte_time: float | None = None

    @property
    def fetch_time(self) -> float:
        return self.complete_time - self.request_time

    @property
    def transfer_duration(self) -> float:
        start = self.request_time if self.first_byte_time is None else self.first_byte_time
        return self.complete_time - start


def bandwidth_at(trace: BandwidthTrace, t: float) -> float:
    k = bisect.bisect_right(trace.times, t) - 1
    return trace.points[max(k, 0)][1]


def transfer_time(trace: BandwidthTrace, start: float, size: float) -> float:
    """Time needed to move `size` kbit starting at `start`.

    Walks the trace breakpoints and integrates the piecewise-constant rate
    exactly; the last interval extends forever, so the result is finite.
    """
    if size <= 0:
        return 0.0
    times = trace.times
    k = max(bisect.bisect_right(times, start) - 1, 0)
    t = start
    remaining = size
    while True:
        rate = trace.points[k][1]
        if k + 1 < len(times):
            span = times[k + 1] - t
            capacity = rate * span
            if capacity < remaining:
                remaining -= capacity
                t = times[k + 1]
                k += 1
                continue
        return (t + remaining / rate) - start


def download(link: Link, request_time: float, size: float) -> DownloadRecord:
    first_byte = request_time + link.request_latency
    complete = first_byte + transfer_time(link.trace, first_byte, size)
    return DownloadRecord(
        request_time=request_time,
        complete_time=complete,
        size=size,
        measured_throughput=size / (complete - request_time),
        first_byte_time=first_byte,
    )


def trace_checksum(trace: BandwidthTrace) -> str:
    return hashlib.sha256(format_trace(trace).encode()).hexdigest()


def _delay_str(delay: float) -> str:
    ms = delay * 1000.0
    return f"{_num(round(ms, 3))}ms"


def emit_shaping_script(trace: BandwidthTrace, interface_name: str = "eth0",
                        delay: float = 0.080, burst_kbit: float = 32.0,
                        tbf_latency_ms: float = 400.0) -> str:
    """Render a POSIX shell script that replays `trace` with tc.

    A netem qdisc adds the fixed delay; a tbf child shapes the rate and is
    changed in place at every breakpoint.
    """
    dev = interface_name
    tbf = f"tbf rate {{rate}}kbit burst {_num(burst_kbit)}kbit latency {_num(tbf_latency_ms)}ms"
    lines = [
        "#!/bin/sh",
        "# Bandwidth shaping script generated by abrbench.",
        f"# trace-sha256: {trace_checksum(trace)}",
        f"# points: {len(trace.points)}  duration_s: {_num(trace.duration)}",
        "# Run as root on the router between server and client.",
        "set -e",
        f'IFACE="{dev}"',
        'tc qdisc del dev "$IFACE" root 2>/dev/null || true',
        f'tc qdisc add dev "$IFACE" root handle 1: netem delay {_delay_str(delay)}',
        'tc qdisc add dev "$IFACE" parent 1: handle 10: ' + tbf.format(rate=_rate(trace.points[0][1])),
    ]
    for (t0, _), (t1, bw) in zip(trace.points, trace.points[1:]):
        lines.append(f"sleep {_num(round(t1 - t0, 6))}")
        lines.append('tc qdisc change dev "$IFACE" parent 1: handle 10: ' + tbf.format(rate=_rate(bw)))
    tail = trace.duration - trace.points[-1][0]
    lines.append(f"sleep {_num(round(tail, 6))}")
    lines.append("# trace finished; the last rate stays in effect")
    return "\n".join(lines) + "\n"


def _rate(bw: float) -> str:
    return _num(round(bw, 3))
