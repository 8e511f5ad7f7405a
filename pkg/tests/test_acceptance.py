"""Acceptance suite: one test per criterion (criterion 6 is split into its
five directional checks). A PASS/FAIL line per criterion is printed in the
terminal summary by the hook in conftest.py."""

import time

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings, strategies as st

from abrbench import cli
from abrbench.adaptation import LOGIC_NAMES, AdaptationContext, AdaptationLogic, Decision, make_logic
from abrbench.adaptation.estimators import dashjs_estimate
from abrbench.engine import run_session, startup_delay
from abrbench.metrics import inefficiency, instability
from abrbench.model import DEFAULT_LADDER, BandwidthTrace, SessionConfig, index_for_bandwidth, load_trace
from abrbench.netsim import transfer_time
from abrbench.tracegen import REFERENCE_DROPS, REFERENCE_MEAN, reference_trace

from oracles import brute_inefficiency, brute_instability, integrate_transfer, random_trace
from test_metrics import seg


# -- 1 -----------------------------------------------------------------------

@pytest.mark.criterion("1")
def test_dashjs_estimate_contracts_by_035():
    t0 = time.perf_counter()
    w1, w2 = 0.7, 1.3
    factor = w1 / (w1 + w2)
    assert factor == pytest.approx(0.35, abs=1e-15)
    for start, target in [(0.0, 1000.0), (5000.0, 1200.0), (150.0, 4400.0), (1e6, 1.0)]:
        e0 = abs(start - target)
        b = start
        for _ in range(100):
            prev_err = b - target
            b = dashjs_estimate(b, target, w1, w2)
            assert abs((b - target) - factor * prev_err) <= 1e-9 * e0
    # the same contraction, observed through the logic's own estimate state
    logic = make_logic("dashjs")
    ctx = _ctx_with_history([3000.0] * 0, mpd=500.0)
    logic.decide(ctx)
    est, history = logic.estimate, []
    for i in range(1, 101):
        history.append(_record(1200.0))
        logic.decide(_ctx_with_history(history, mpd=500.0, current=1))
        assert abs((logic.estimate - 1200.0) - 0.35 * (est - 1200.0)) <= 1e-9 * 700.0
        est = logic.estimate
    assert time.perf_counter() - t0 < 1.0


def _record(throughput, size=200.0):
    from abrbench.netsim import DownloadRecord
    return DownloadRecord(0.0, size / throughput, size, throughput, 0.0)


def _ctx_with_history(history, mpd, current=None, buffer=0.0):
    return AdaptationContext(DEFAULT_LADDER, 2.0, len(history), current, buffer,
                             tuple(history), mpd, 0.0)


# -- 2 -----------------------------------------------------------------------

@pytest.mark.criterion("2")
def test_metrics_match_brute_force_oracles():
    t0 = time.perf_counter()
    rng = np.random.default_rng(20)
    for _ in range(1000):
        n = int(rng.integers(1, 60))
        b = rng.choice(DEFAULT_LADDER.bitrates, n)
        w = rng.uniform(50, 8000, n)
        got = inefficiency([seg(i, 1, bi, wi) for i, (bi, wi) in enumerate(zip(b, w))])
        want = brute_inefficiency(b.tolist(), w.tolist())
        assert abs(got - want) <= 1e-12 * abs(want)
    for _ in range(1000):
        k = int(rng.integers(2, 25))
        length = int(rng.integers(k + 1, 201))
        series = rng.choice(DEFAULT_LADDER.bitrates, length) * rng.uniform(0.5, 2.0)
        got = instability(series, k)
        want = brute_instability(series.tolist(), k)
        assert abs(got - want) <= 1e-12 * max(abs(want), 1e-300)
    assert inefficiency([seg(0, 6, 900.0, 1000.0)]) == 0.1
    assert inefficiency([seg(0, 6, 900.0, 1000.0), seg(1, 8, 1200.0, 1000.0)]) == 0.15
    assert instability([1.0, 1.0, 2.0], k=2) == 2.0
    assert time.perf_counter() - t0 < 5.0


# -- 3 -----------------------------------------------------------------------

@pytest.mark.criterion("3")
def test_transfer_time_matches_numeric_integration():
    t0 = time.perf_counter()
    rng = np.random.default_rng(30)
    worst = 0.0
    for _ in range(1000):
        trace = random_trace(rng, duration=120.0, pieces=(1, 10), low=300.0, high=6000.0)
        start = float(rng.uniform(0, 150.0))
        size = float(rng.uniform(3000.0, 40000.0))
        exact = transfer_time(trace, start, size)
        numeric = integrate_transfer(trace, start, size)
        worst = max(worst, abs(exact - numeric) / exact)
    assert worst <= 0.005, f"worst relative error {worst:.2e}"
    assert time.perf_counter() - t0 < 10.0


# -- 4 -----------------------------------------------------------------------

def _check_conservation(log):
    assert log.events, "no events logged"
    for e in log.events:
        assert e.buffer >= 0.0
        assert abs(e.downloaded - (e.played + e.buffer)) <= 1e-9 * max(1.0, e.downloaded)
    times = [e.time for e in log.events]
    assert all(b >= a for a, b in zip(times, times[1:]))
    total = log.config.segment_count * log.config.segment_duration
    assert len(log.segments) == log.config.segment_count
    assert log.events[-1].kind == "end"
    assert abs(log.events[-1].played - total) <= 1e-6


@pytest.mark.criterion("4")
def test_conservation_suite():
    t0 = time.perf_counter()
    rng = np.random.default_rng(40)
    traces = [random_trace(rng, duration=400.0, low=100.0, high=6000.0) for _ in range(20)]
    for trace in traces:
        for d in (2.0, 10.0):
            config = SessionConfig(segment_duration=d, media_duration=300.0, seed=7)
            for name in LOGIC_NAMES:
                log = run_session(config, trace, DEFAULT_LADDER, make_logic(name, seed=7))
                _check_conservation(log)
                if name == "festive":
                    again = run_session(config, trace, DEFAULT_LADDER, make_logic(name, seed=7))
                    assert again.to_text() == log.to_text()
    # determinism for every logic on one trace
    config = SessionConfig(segment_duration=2.0, media_duration=300.0, seed=3)
    for name in LOGIC_NAMES:
        a = run_session(config, traces[0], DEFAULT_LADDER, make_logic(name, seed=3)).to_text()
        b = run_session(config, traces[0], DEFAULT_LADDER, make_logic(name, seed=3)).to_text()
        assert a == b
    assert time.perf_counter() - t0 < 30.0


# -- 5 -----------------------------------------------------------------------

traces = st.builds(
    lambda seed, pieces: random_trace(np.random.default_rng(seed), 300.0, (1, pieces), 100.0, 6000.0),
    st.integers(0, 2**32 - 1), st.integers(1, 10))


def _session(name, trace, d):
    config = SessionConfig(segment_duration=d, media_duration=200.0)
    return run_session(config, trace, DEFAULT_LADDER, make_logic(name))


@pytest.mark.criterion("5")
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(trace=traces, d=st.sampled_from([2.0, 10.0]))
def test_per_logic_structural_properties(trace, d):
    segs = _session("instant", trace, d).segments
    for prev, cur in zip(segs, segs[1:]):
        assert cur.bitrate < prev.measured_throughput or cur.rep == 1

    segs = _session("festive", trace, d).segments
    for prev, cur in zip(segs, segs[1:]):
        assert abs(cur.rep - prev.rep) <= 1

    segs = _session("qdash", trace, d).segments
    for prev, cur in zip(segs, segs[1:]):
        target = index_for_bandwidth(DEFAULT_LADDER, prev.measured_throughput)
        if target <= prev.rep - 2:
            assert target < cur.rep < prev.rep

    assert _session("thang", trace, d).segments[0].rep == 1

    # steady state: a link that has been constant for 120 s or more; rep 1
    # is the floor and cannot go lower
    constant = BandwidthTrace(((0.0, trace.points[0][1]),), 300.0)
    for name in LOGIC_NAMES:
        if name in ("liu", "osmf"):
            continue
        segs = run_session(SessionConfig(segment_duration=d, media_duration=400.0), constant,
                           DEFAULT_LADDER, make_logic(name)).segments
        for prev, cur in zip(segs, segs[1:]):
            if cur.request_time >= 120.0:
                assert cur.bitrate <= prev.measured_throughput or cur.rep == 1, (name, cur)


@pytest.mark.criterion("5")
def test_liu_and_osmf_do_exceed_measured_throughput_in_steady_state():
    seen = set()
    for rate in np.arange(200.0, 6000.0, 300.0):
        constant = BandwidthTrace(((0.0, float(rate)),), 300.0)
        for name in ("liu", "osmf"):
            segs = run_session(SessionConfig(media_duration=400.0), constant, DEFAULT_LADDER,
                               make_logic(name)).segments
            if any(c.bitrate > p.measured_throughput for p, c in zip(segs, segs[1:]) if c.request_time >= 120):
                seen.add(name)
    assert seen == {"liu", "osmf"}


# -- 6 -----------------------------------------------------------------------

@pytest.fixture(scope="module")
def matrix():
    t0 = time.perf_counter()
    trace = reference_trace()
    out = {}
    for name in LOGIC_NAMES:
        for d in (2.0, 10.0):
            config = SessionConfig(segment_duration=d, media_duration=700.0)
            log = run_session(config, trace, DEFAULT_LADDER, make_logic(name))
            out[name, d] = (float(np.mean([s.bitrate for s in log.segments])), len(log.stalls))
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    return out


@pytest.mark.criterion("6")
def test_reference_trace_constraints():
    trace = reference_trace()
    assert abs(trace.mean() - REFERENCE_MEAN) <= 0.01 * REFERENCE_MEAN
    assert trace.duration == 700.0
    for drop in REFERENCE_DROPS:
        k = trace.times.index(drop)
        assert trace.rates[k] < 0.5 * trace.rates[k - 1]


@pytest.mark.criterion("6a")
def test_thang_has_no_stalls(matrix):
    assert matrix["thang", 2.0][1] == 0
    assert matrix["thang", 10.0][1] == 0


@pytest.mark.criterion("6b")
def test_miller_has_no_stalls_at_2s(matrix):
    assert matrix["miller", 2.0][1] == 0


@pytest.mark.criterion("6c")
def test_osmf_stalls_most_at_2s(matrix):
    osmf = matrix["osmf", 2.0][1]
    others = {n: matrix[n, 2.0][1] for n in LOGIC_NAMES if n != "osmf"}
    assert all(osmf > v for v in others.values()), (osmf, others)


@pytest.mark.criterion("6d")
def test_festive_10s_throughput_collapses(matrix):
    two, ten = matrix["festive", 2.0][0], matrix["festive", 10.0][0]
    assert ten < 0.55 * two, f"festive 10 s {ten:.1f} kbps vs 2 s {two:.1f} kbps (ratio {ten / two:.3f})"


@pytest.mark.criterion("6e")
def test_conservative_logics_below_aggressive_ones(matrix):
    low = {n: matrix[n, 2.0][0] for n in ("miller", "panda", "thang")}
    high = {n: matrix[n, 2.0][0] for n in ("dashjs", "instant", "osmf")}
    assert max(low.values()) < min(high.values()), (low, high)


# -- 7 -----------------------------------------------------------------------

class _Lowest(AdaptationLogic):
    name = "lowest"

    def decide(self, ctx):
        return Decision(1)


@pytest.mark.criterion("7")
def test_startup_needs_four_seconds_of_media():
    for d, segments_needed in ((2.0, 2), (10.0, 1)):
        for name in LOGIC_NAMES:
            log = run_session(SessionConfig(segment_duration=d, media_duration=100.0),
                              reference_trace(), DEFAULT_LADDER, make_logic(name))
            k = next(i for i, e in enumerate(log.events) if e.kind == "start")
            done = sum(1 for e in log.events[:k] if e.kind == "complete")
            assert done == segments_needed
            assert log.events[k].buffer == segments_needed * d
    # 1000 kbps link, rep 1 throughout: MPD 0.16 + 10/1000, each segment 0.16 + 200/1000
    log = run_session(SessionConfig(segment_duration=2.0, media_duration=20.0),
                      BandwidthTrace.constant(1000.0, 100.0), DEFAULT_LADDER, _Lowest())
    assert abs(startup_delay(log) - 0.89) <= 1e-9


# -- 8 -----------------------------------------------------------------------

@pytest.mark.criterion("8")
def test_cli_round_trip(tmp_path, capsys):
    trace_path = tmp_path / "trace.csv"
    assert cli.main(["gen-trace", "--out", str(trace_path)]) == 0
    generated = load_trace(trace_path)
    assert abs(generated.mean() - REFERENCE_MEAN) <= 0.01 * REFERENCE_MEAN

    first, second = tmp_path / "a", tmp_path / "b"
    assert cli.main(["run", "--out", str(first), "--trace", str(trace_path), "--seed", "5"]) == 0
    assert cli.main(["run", "--out", str(second), "--trace", str(trace_path), "--seed", "5"]) == 0
    rows = (first / "summary.csv").read_text().splitlines()
    assert len(rows) == 1 + 20
    files_a = sorted(p.relative_to(first) for p in first.rglob("*") if p.is_file())
    files_b = sorted(p.relative_to(second) for p in second.rglob("*") if p.is_file())
    assert files_a == files_b
    for rel in files_a:
        assert (first / rel).read_bytes() == (second / rel).read_bytes(), rel

    script = tmp_path / "shape.sh"
    assert cli.main(["export-netem", "--out", str(script)]) == 0
    assert "80ms" in script.read_text()
