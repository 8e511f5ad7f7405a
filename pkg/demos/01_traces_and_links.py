"""Bandwidth traces and the simulated link.

A trace is a piecewise-constant bandwidth schedule. The reference trace is
700 s long, averages about 1270 kbps and has two sharp drops. This script
builds it, shows how long a few downloads take on it, and prints the first
lines of the tc/netem script that would impose the same schedule on a real
router.
"""

from abrbench import Link, download, emit_shaping_script, reference_trace, transfer_time
from abrbench.tracegen import generate_trace

trace = reference_trace()
print(f"reference trace: {len(trace.points)} steps, mean {trace.mean():.2f} kbps")
for t, bw in trace.points:
    print(f"  from {t:7.3f} s  {bw:8.2f} kbps")

# A 2 s segment of the 1300 kbps representation is 2600 kbit. Before the
# first drop it moves quickly; requested just before 350 s it straddles the drop.
for start in (100.0, 349.0, 360.0):
    print(f"2600 kbit starting at {start:5.1f} s takes {transfer_time(trace, start, 2600.0):6.3f} s")

# The client sees one round trip of latency on top of the payload time, so
# the throughput it measures is a little below the link rate.
rec = download(Link(trace), 100.0, 2600.0)
print(f"request at 100 s: done at {rec.complete_time:.3f} s, measured {rec.measured_throughput:.1f} kbps")

# Other traces with the same recipe: different seed, mean and drop times.
other = generate_trace(duration=300.0, target_mean=2000.0, drops=(120.0,), seed=9)
print(f"custom trace: {len(other.points)} steps, mean {other.mean():.2f} kbps")

print()
print("\n".join(emit_shaping_script(trace).splitlines()[:12]))
print("...")
