"""Domain types: bitrate ladder, bandwidth traces and session configuration.

Units are kbps for rates, kbit for sizes and seconds for time throughout.
"""

from __future__ import annotations

import bisect
import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path


class ModelError(ValueError):
    """Raised when a ladder, trace or config violates its invariants."""


class ParseError(ModelError):
    def __init__(self, message: str, path=None, line: int | None = None):
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)
        self.line = line


@dataclass(frozen=True)
class Representation:
    id: int
    width: int
    height: int
    bitrate: float

    def __post_init__(self):
        for name in ("width", "height", "bitrate"):
            if not getattr(self, name) > 0:
                raise ModelError(f"{name} must be positive (representation {self.id})")


@dataclass(frozen=True)
class Ladder:
    reps: tuple[Representation, ...]

    def __post_init__(self):
        reps = tuple(self.reps)
        object.__setattr__(self, "reps", reps)
        if len(reps) < 2:
            raise ModelError("at least 2 representations required")
        for k, rep in enumerate(reps, start=1):
            if rep.id != k:
                raise ModelError(f"id: representation ids must be contiguous 1..N (got {rep.id} at position {k})")
        for lo, hi in zip(reps, reps[1:]):
            if not hi.bitrate > lo.bitrate:
                raise ModelError("bitrate: bitrates not increasing")

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def bitrates(self) -> tuple[float, ...]:
        return tuple(r.bitrate for r in self.reps)

    def bitrate(self, rep_id: int) -> float:
        return self.reps[rep_id - 1].bitrate

    def clamp(self, rep_id: int) -> int:
        return min(max(rep_id, 1), len(self.reps))


# (id, width, height, bitrate_kbps) of the Big Buck Bunny encoding used for evaluation.
_DEFAULT_ROWS = [
    (1, 192, 108, 100),
    (2, 192, 108, 150),
    (3, 320, 180, 200),
    (4, 480, 270, 350),
    (5, 960, 540, 500),
    (6, 960, 540, 700),
    (7, 960, 540, 900),
    (8, 1280, 720, 1100),
    (9, 1920, 1080, 1300),
    (10, 1920, 1080, 1600),
    (11, 1920, 1080, 1900),
    (12, 1920, 1080, 2300),
    (13, 1920, 1080, 2800),
    (14, 1920, 1080, 3400),
    (15, 1920, 1080, 4500),
]

DEFAULT_LADDER = Ladder(tuple(Representation(*row) for row in _DEFAULT_ROWS))


def index_for_bandwidth(ladder: Ladder, bandwidth: float) -> int:
    """Id of the highest representation whose bitrate is strictly below
    `bandwidth`, clamped to 1 when nothing qualifies."""
    k = bisect.bisect_left(ladder.bitrates, bandwidth)
    return max(k, 1)


LADDER_HEADER = ["id", "width", "height", "bitrate_kbps"]


def parse_ladder(text: str, path=None) -> Ladder:
    rows = _csv_rows(text)
    if not rows:
        raise ModelError("at least 2 representations required")
    lineno, header = rows[0]
    if [h.strip() for h in header] != LADDER_HEADER:
        raise ParseError(f"expected header {','.join(LADDER_HEADER)}", path, lineno)
    reps = []
    for lineno, row in rows[1:]:
        if len(row) != 4:
            raise ParseError(f"expected 4 fields, got {len(row)}", path, lineno)
        try:
            rid, w, h = (int(x) for x in row[:3])
            rate = float(row[3])
        except ValueError as exc:
            raise ParseError(f"bad number ({exc})", path, lineno) from None
        try:
            reps.append(Representation(rid, w, h, rate))
        except ModelError as exc:
            raise ParseError(str(exc), path, lineno) from None
    try:
        return Ladder(tuple(reps))
    except ModelError as exc:
        raise ParseError(str(exc), path) from None


def load_ladder(path: str | Path | None = None) -> Ladder:
    """Load a ladder CSV; ``None`` or ``"default"`` gives the built-in ladder."""
    if path is None or str(path) == "default":
        return DEFAULT_LADDER
    text = Path(path).read_text()
    if not text.strip():
        raise ModelError("at least 2 representations required")
    return parse_ladder(text, path)


def format_ladder(ladder: Ladder) -> str:
    out = io.StringIO()
    out.write(",".join(LADDER_HEADER) + "\n")
    for r in ladder.reps:
        out.write(f"{r.id},{r.width},{r.height},{_num(r.bitrate)}\n")
    return out.getvalue()


@dataclass(frozen=True)
class BandwidthTrace:
    """Piecewise-constant bandwidth over left-closed intervals.

    ``points`` holds ``(start_time, kbps)`` pairs; the last value is held for
    every ``t >= duration`` as well.
    """

    points: tuple[tuple[float, float], ...]
    duration: float

    def __post_init__(self):
        pts = tuple((float(t), float(bw)) for t, bw in self.points)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "duration", float(self.duration))
        if not pts:
            raise ModelError("trace must contain at least one point")
        if pts[0][0] != 0.0:
            raise ModelError("trace must start at t=0")
        for (t0, _), (t1, _) in zip(pts, pts[1:]):
            if not t1 > t0:
                raise ModelError(f"timestamps not increasing at t={t1:g}")
        for t, bw in pts:
            if not bw > 0 or not math.isfinite(bw):
                raise ModelError(f"bandwidth must be positive (t={t:g})")
        if not pts[-1][0] < self.duration:
            raise ModelError("all start times must be below the trace duration")

    @property
    def times(self) -> tuple[float, ...]:
        return tuple(t for t, _ in self.points)

    @property
    def rates(self) -> tuple[float, ...]:
        return tuple(bw for _, bw in self.points)

    @classmethod
    def constant(cls, bandwidth: float, duration: float = 1.0) -> "BandwidthTrace":
        return cls(((0.0, bandwidth),), duration)

    def mean(self) -> float:
        """Time average over [0, duration]."""
        edges = list(self.times) + [self.duration]
        total = sum(bw * (edges[k + 1] - edges[k]) for k, (_, bw) in enumerate(self.points))
        return total / self.duration


TRACE_HEADER = ["time_s", "bandwidth_kbps"]


def parse_trace(text: str, path=None, duration: float | None = None) -> BandwidthTrace:
    file_duration = None
    body = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, sep, value = line[1:].partition("=")
            if sep and key.strip() == "duration_s":
                try:
                    file_duration = float(value)
                except ValueError:
                    raise ParseError("bad duration_s value", path, lineno) from None
            continue
        body.append((lineno, line))
    if not body:
        raise ParseError("empty trace", path)
    lineno, header = body[0]
    if [h.strip() for h in header.split(",")] != TRACE_HEADER:
        raise ParseError(f"expected header {','.join(TRACE_HEADER)}", path, lineno)
    points = []
    for lineno, line in body[1:]:
        fields = line.split(",")
        if len(fields) != 2:
            raise ParseError(f"expected 2 fields, got {len(fields)}", path, lineno)
        try:
            t, bw = float(fields[0]), float(fields[1])
        except ValueError as exc:
            raise ParseError(f"bad number ({exc})", path, lineno) from None
        if not points and t != 0.0:
            raise ParseError("trace must start at t=0", path, lineno)
        if points and not t > points[-1][0]:
            raise ParseError("timestamps not increasing", path, lineno)
        if not bw > 0:
            raise ParseError("bandwidth must be positive", path, lineno)
        points.append((t, bw))
    if not points:
        raise ParseError("trace has no points", path)
    if duration is None:
        duration = file_duration
    if duration is None:
        raise ParseError("missing '# duration_s=' line", path)
    try:
        return BandwidthTrace(tuple(points), duration)
    except ModelError as exc:
        raise ParseError(str(exc), path) from None


def load_trace(path: str | Path, duration: float | None = None) -> BandwidthTrace:
    return parse_trace(Path(path).read_text(), path, duration)


def format_trace(trace: BandwidthTrace) -> str:
    lines = [f"# duration_s={_num(trace.duration)}", ",".join(TRACE_HEADER)]
    lines += [f"{_num(t)},{_num(bw)}" for t, bw in trace.points]
    return "\n".join(lines) + "\n"


def save_trace(trace: BandwidthTrace, path: str | Path) -> None:
    Path(path).write_text(format_trace(trace))


@dataclass(frozen=True)
class SessionConfig:
    segment_duration: float = 2.0
    media_duration: float = 700.0
    mpd_size: float = 10.0
    request_latency: float = 0.160
    startup_threshold: float = 4.0
    resume_threshold: float | None = None  # None -> one segment
    seed: int = 0

    def __post_init__(self):
        if self.resume_threshold is None:
            object.__setattr__(self, "resume_threshold", float(self.segment_duration))
        if not self.segment_duration > 0:
            raise ModelError("segment_duration must be positive")
        n = self.media_duration / self.segment_duration
        if self.media_duration <= 0 or abs(n - round(n)) > 1e-9:
            raise ModelError("media_duration must be a positive multiple of segment_duration")
        if not self.startup_threshold > 0:
            raise ModelError("startup_threshold must be positive")
        if not self.resume_threshold > 0:
            raise ModelError("resume_threshold must be positive")
        if self.request_latency < 0:
            raise ModelError("request_latency must be non-negative")
        if self.mpd_size <= 0:
            raise ModelError("mpd_size must be positive")
        if self.seed < 0:
            raise ModelError("seed must be unsigned")

    @property
    def segment_count(self) -> int:
        return int(round(self.media_duration / self.segment_duration))


def _csv_rows(text: str) -> list[tuple[int, list[str]]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        rows.append((lineno, next(csv.reader([line]))))
    return rows


def _num(x: float) -> str:
    """Shortest round-tripping decimal form, without a trailing '.0'."""
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))
