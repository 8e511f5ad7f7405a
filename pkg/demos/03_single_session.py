"""One streaming session, step by step.

Runs the FESTIVE-style logic over the reference trace with 2 s segments and
walks through what the engine recorded: the startup, the segment choices
around the first bandwidth drop, and the summary metrics.
"""

from abrbench import DEFAULT_LADDER, SessionConfig, make_logic, reference_trace, run_session, summarize

config = SessionConfig(segment_duration=2.0, media_duration=700.0, seed=0)
log = run_session(config, reference_trace(), DEFAULT_LADDER, make_logic("festive", seed=0))

print(f"playback started at {log.playback_start:.3f} s, session ended at {log.session_end:.1f} s")
start = next(e for e in log.events if e.kind == "start")
print(f"buffer when playback started: {start.buffer:g} s of media")

print("\nsegments requested around the drop at 350 s:")
print("  idx  rep  kbps   request   measured  buffer")
for s in log.segments:
    if 330.0 <= s.request_time <= 420.0:
        print(f"  {s.index:3d}  {s.rep:3d}  {s.bitrate:5.0f}  {s.request_time:8.2f}  "
              f"{s.measured_throughput:8.1f}  {s.buffer_after:6.2f}")

# Every event carries the media accounting; what came in equals what was
# played plus what is still buffered.
worst = max(abs(e.downloaded - e.played - e.buffer) for e in log.events)
print(f"\nlargest accounting mismatch over {len(log.events)} events: {worst:.2e} s")

report = summarize(log)
for name in ("media_throughput", "inefficiency", "instability", "avg_buffer", "startup_delay",
             "stall_count", "switch_count", "switch_amplitude_mean"):
    print(f"{name:>22}: {getattr(report, name):.4f}")
