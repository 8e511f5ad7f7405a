"""The ten logics side by side.

Runs every logic at 2 s and 10 s segments over the reference trace and
prints media throughput and stall counts. The same matrix is what
`abrbench run` writes to summary.csv and table.csv.
"""

from abrbench import DEFAULT_LADDER, LOGIC_NAMES, SessionConfig, make_logic, reference_trace, run_session, summarize

trace = reference_trace()
rows = {}
for name in LOGIC_NAMES:
    for d in (2.0, 10.0):
        log = run_session(SessionConfig(segment_duration=d, media_duration=700.0), trace,
                          DEFAULT_LADDER, make_logic(name))
        rows[name, d] = summarize(log)

print(f"{'logic':10s} {'kbps 2s':>9s} {'kbps 10s':>9s} {'stalls 2s':>10s} {'stalls 10s':>11s} {'buffer 2s':>10s}")
for name in LOGIC_NAMES:
    a, b = rows[name, 2.0], rows[name, 10.0]
    print(f"{name:10s} {a.media_throughput:9.1f} {b.media_throughput:9.1f} "
          f"{a.stall_count:10.0f} {b.stall_count:11.0f} {a.avg_buffer:10.1f}")

# Buffer-driven and probing logics trade throughput for a fuller buffer.
# The jump-to-target logic stalls most often with short segments.
stalls = {n: rows[n, 2.0].stall_count for n in LOGIC_NAMES}
print("\nmost stalls at 2 s:", max(stalls, key=stalls.get))
