"""Plugging in a new logic and overriding parameters.

A logic is a subclass of AdaptationLogic with a `decide` method. Tunables
live in a nested Params dataclass so they can be overridden by name, the
same way a parameter file does for the built-in logics.
"""

from dataclasses import dataclass

from abrbench import DEFAULT_LADDER, SessionConfig, make_logic, reference_trace, run_session, summarize
from abrbench.adaptation import AdaptationLogic, Decision
from abrbench.config import parse_params
from abrbench.model import index_for_bandwidth


class BufferBands(AdaptationLogic):
    """Choose the throughput-matched level, scaled down while the buffer is thin."""

    name = "bands"

    @dataclass(frozen=True)
    class Params:
        thin: float = 10.0
        scale: float = 0.6

    def decide(self, ctx):
        w = ctx.last_throughput
        if ctx.buffer_level < self.params.thin:
            w *= self.params.scale
        return Decision(index_for_bandwidth(ctx.ladder, w))


trace = reference_trace()
config = SessionConfig(segment_duration=2.0)
for logic in (BufferBands(), BufferBands(thin=30.0, scale=0.4)):
    r = summarize(run_session(config, trace, DEFAULT_LADDER, logic))
    print(f"bands {logic.params}: {r.media_throughput:.1f} kbps, {r.stall_count} stalls")

# Built-in logics take overrides from an INI parameter file.
params = parse_params("""
[abrbench]
version = 1

[thang]
safety = 0.95
""")
for label, overrides in (("default", {}), ("file", params.for_logic("thang"))):
    r = summarize(run_session(config, trace, DEFAULT_LADDER, make_logic("thang", params=overrides)))
    print(f"thang ({label}): {r.media_throughput:.1f} kbps, {r.stall_count} stalls")
