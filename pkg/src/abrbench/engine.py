"""Discrete-event simulation of one streaming session."""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field, asdict

from .adaptation import AdaptationContext, AdaptationLogic, Decision
from .model import BandwidthTrace, Ladder, SessionConfig
from .netsim import DownloadRecord, Link, download


@dataclass(frozen=True)
class SegmentRecord:
    index: int
    rep: int
    bitrate: float
    request_time: float
    complete_time: float
    measured_throughput: float
    buffer_after: float


@dataclass(frozen=True)
class StallInterval:
    start: float
    end: float

    @property
    def duration(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class Event:
    """State right after something happened.

    ``downloaded`` and ``played`` are media seconds; the engine keeps
    ``downloaded == played + buffer`` once playback has started.
    """

    time: float
    kind: str
    buffer: float
    downloaded: float
    played: float
    segment: int | None = None


@dataclass
class SessionLog:
    config: SessionConfig
    logic_name: str
    segments: list[SegmentRecord]
    stalls: list[StallInterval]
    mpd_record: DownloadRecord
    playback_start: float
    session_end: float
    events: list[Event] = field(default_factory=list)

    @property
    def buffer_samples(self) -> list[tuple[float, float]]:
        """(time, buffer) after every event.

        The buffer is linear between samples with distinct times; a segment
        arrival logs the level just before and just after the jump at the
        same time.
        """
        return [(e.time, e.buffer) for e in self.events]

    def to_text(self) -> str:
        return format_session_log(self)


class _Playback:
    """Buffer and playhead bookkeeping between events."""

    def __init__(self, total_media: float):
        self.total = total_media
        self.t = 0.0
        self.buffer = 0.0
        self.downloaded = 0.0
        self.played = 0.0
        self.state = "startup"  # startup | playing | stalled | ended
        self.stall_start = None
        self.stalls: list[StallInterval] = []
        self.playback_start = None
        self.events: list[Event] = []

    def log(self, kind: str, segment: int | None = None) -> None:
        self.events.append(Event(self.t, kind, self.buffer, self.downloaded, self.played, segment))

    def advance(self, to: float) -> None:
        if to < self.t:
            raise RuntimeError(f"clock moved backwards: {to} < {self.t}")
        dt = to - self.t
        if self.state == "playing" and dt > 0:
            if self.buffer > dt:
                self.buffer -= dt
                self.played += dt
            else:
                self.t += self.buffer
                self.played += self.buffer
                self.buffer = 0.0
                if self.downloaded >= self.total:
                    self.state = "ended"
                    self.log("end")
                else:
                    self.state = "stalled"
                    self.stall_start = self.t
                    self.log("stall")
        self.t = to

    def add_segment(self, duration: float) -> None:
        self.buffer += duration
        self.downloaded += duration

    def maybe_start(self, threshold: float, force: bool) -> None:
        if self.state == "startup" and (self.buffer >= threshold or force):
            self.state = "playing"
            self.playback_start = self.t
            self.log("start")
        elif self.state == "stalled" and (self.buffer >= threshold or force):
            self.state = "playing"
            self.stalls.append(StallInterval(self.stall_start, self.t))
            self.stall_start = None
            self.log("resume")


def run_session(config: SessionConfig, trace: BandwidthTrace, ladder: Ladder,
                logic: AdaptationLogic) -> SessionLog:
    """Simulate one session of `logic` over `trace`.

    The MPD is fetched at t=0, then segments are requested back to back
    unless a Decision defers the request. Playback starts once
    ``startup_threshold`` seconds are buffered, stalls when the buffer runs
    dry, and resumes at ``resume_threshold`` (or with the final segment).
    """
    link = Link(trace, config.request_latency)
    d = config.segment_duration
    n = config.segment_count
    pb = _Playback(n * d)

    mpd = download(link, 0.0, config.mpd_size)
    pb.log("mpd_request")
    pb.advance(mpd.complete_time)
    pb.log("mpd")

    history: list[DownloadRecord] = []
    segments: list[SegmentRecord] = []
    current = None
    for i in range(n):
        ctx = AdaptationContext(
            ladder=ladder,
            segment_duration=d,
            segment_index=i,
            current_rep=current,
            buffer_level=pb.buffer,
            history=tuple(history),
            mpd_throughput=mpd.measured_throughput,
            now=pb.t,
        )
        decision = logic.decide(ctx)
        rep = _check_decision(decision, ladder, logic)
        if decision.not_before is not None and decision.not_before > pb.t:
            pb.advance(decision.not_before)
            pb.log("wait", i)
        if (decision.max_buffer is not None and pb.state == "playing"
                and pb.buffer > decision.max_buffer):
            drain_to = decision.drain_to if decision.drain_to is not None else decision.max_buffer
            pb.advance(pb.t + (pb.buffer - drain_to))
            pb.log("defer", i)
        size = ladder.bitrate(rep) * d
        rec = download(link, pb.t, size)
        pb.log("request", i)
        pb.advance(rec.complete_time)
        pb.log("arrival", i)
        pb.add_segment(d)
        pb.log("complete", i)
        pb.maybe_start(config.startup_threshold if pb.state == "startup" else config.resume_threshold,
                       force=(i == n - 1))
        history.append(rec)
        segments.append(SegmentRecord(
            index=i,
            rep=rep,
            bitrate=ladder.bitrate(rep),
            request_time=rec.request_time,
            complete_time=rec.complete_time,
            measured_throughput=rec.measured_throughput,
            buffer_after=pb.buffer,
        ))
        current = rep

    pb.advance(pb.t + pb.buffer)
    if pb.state != "ended":
        # Only reachable when the final drain lands exactly on the clock.
        pb.state = "ended"
        pb.log("end")
    return SessionLog(
        config=config,
        logic_name=logic.name,
        segments=segments,
        stalls=pb.stalls,
        mpd_record=mpd,
        playback_start=pb.playback_start,
        session_end=pb.t,
        events=pb.events,
    )


def _check_decision(decision: Decision, ladder: Ladder, logic) -> int:
    rep = decision.rep
    if not isinstance(rep, int) or not 1 <= rep <= len(ladder):
        raise ValueError(f"{logic.name}: invalid representation {rep!r}")
    return rep


def startup_delay(log: SessionLog) -> float:
    """Time from the MPD request (t=0) to playback start."""
    return log.playback_start


def format_session_log(log: SessionLog) -> str:
    """Line-oriented event file: a JSON header line, then one
    tab-separated record per line tagged ``segment``, ``stall`` or ``event``."""
    out = io.StringIO()
    header = {
        "format": "abrbench-session/1",
        "logic": log.logic_name,
        "config": asdict(log.config),
        "mpd": asdict(log.mpd_record),
        "playback_start": log.playback_start,
        "session_end": log.session_end,
    }
    out.write("# " + json.dumps(header, sort_keys=True) + "\n")
    out.write("segment\tindex\trep\tbitrate_kbps\trequest_s\tcomplete_s\tthroughput_kbps\tbuffer_s\n")
    for s in log.segments:
        out.write(f"segment\t{s.index}\t{s.rep}\t{s.bitrate!r}\t{s.request_time!r}\t"
                  f"{s.complete_time!r}\t{s.measured_throughput!r}\t{s.buffer_after!r}\n")
    for st in log.stalls:
        out.write(f"stall\t{st.start!r}\t{st.end!r}\n")
    for e in log.events:
        seg = "" if e.segment is None else e.segment
        out.write(f"event\t{e.time!r}\t{e.kind}\t{e.buffer!r}\t{e.downloaded!r}\t{e.played!r}\t{seg}\n")
    return out.getvalue()
