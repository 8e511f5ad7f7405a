from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Any, ClassVar, Sequence

import numpy as np

from ..model import Ladder
from ..netsim import DownloadRecord


@dataclass(frozen=True)
class AdaptationContext:
    """Snapshot handed to a logic before each segment request."""

    ladder: Ladder
    segment_duration: float
    segment_index: int
    current_rep: int | None
    buffer_level: float
    history: Sequence[DownloadRecord]
    mpd_throughput: float
    now: float

    def __post_init__(self):
        if self.buffer_level < 0:
            raise ValueError("buffer_level must be non-negative")
        if len(self.history) != self.segment_index:
            raise ValueError("history length must equal segment_index")

    @property
    def last_throughput(self) -> float:
        """Throughput of the previous segment, or of the MPD before any."""
        if self.history:
            return self.history[-1].measured_throughput
        return self.mpd_throughput

    def throughputs(self, n: int | None = None) -> list[float]:
        recs = self.history if n is None else self.history[-n:]
        return [r.measured_throughput for r in recs]


@dataclass(frozen=True)
class Decision:
    """Representation for the next segment plus scheduling constraints.

    ``max_buffer``: if the buffer exceeds it when the request is due, the
    engine waits until the buffer has drained to ``drain_to`` (defaults to
    ``max_buffer``).
    """

    rep: int
    not_before: float | None = None
    max_buffer: float | None = None
    drain_to: float | None = None

    def __post_init__(self):
        if self.max_buffer is not None and not self.max_buffer > 0:
            raise ValueError("max_buffer must be positive")
        if self.drain_to is not None:
            if self.max_buffer is None or not 0 < self.drain_to <= self.max_buffer:
                raise ValueError("drain_to requires 0 < drain_to <= max_buffer")


class AdaptationLogic:
    """Base class for adaptation logics.

    Subclasses set ``name`` and ``Params`` (a dataclass of tunables) and
    implement :meth:`decide`. All mutable scratch lives on the instance and
    is rebuilt by :meth:`reset`, so a logic is fully determined by its seed
    and the contexts it has seen.
    """

    name: ClassVar[str] = ""

    @dataclass(frozen=True)
    class Params:
        pass

    def __init__(self, seed: int = 0, **overrides: Any):
        self.params = self.Params(**overrides)
        self.seed = seed
        self.reset(seed)

    def reset(self, seed: int | None = None) -> None:
        if seed is not None:
            self.seed = seed
        self.rng = np.random.default_rng(self.seed)
        self._init_state()

    def _init_state(self) -> None:
        pass

    def decide(self, ctx: AdaptationContext) -> Decision:
        raise NotImplementedError

    @classmethod
    def param_names(cls) -> list[str]:
        return [f.name for f in dataclasses.fields(cls.Params)]

    def __repr__(self):
        return f"{type(self).__name__}(seed={self.seed}, params={self.params})"
