import pytest
from hypothesis import given, settings, strategies as st

from abrbench.tracegen import (REFERENCE_MEAN, TraceGenerationError, check_mean, generate_trace,
                               reference_trace)


def test_reference_trace_shape():
    t = reference_trace()
    assert t.duration == 700.0
    assert abs(t.mean() - REFERENCE_MEAN) < 0.01 * REFERENCE_MEAN
    assert 350.0 in t.times and 600.0 in t.times
    assert min(t.rates) >= 150.0
    assert reference_trace() == t


def test_constant_trace_when_one_step_and_no_drops():
    t = generate_trace(duration=100.0, target_mean=800.0, drops=(), steps=1)
    assert t.points == ((0.0, 800.0),)


@settings(max_examples=40, deadline=None)
@given(st.floats(100, 2000), st.floats(300, 5000), st.integers(0, 2**31), st.integers(0, 3))
def test_generated_mean_is_on_target(duration, mean, seed, n_drops):
    drops = [duration * (k + 1) / (n_drops + 1) for k in range(n_drops)]
    t = generate_trace(duration, mean, drops, seed)
    assert abs(t.mean() - mean) <= 0.01 * mean
    for d in drops:
        assert d in t.times
    assert generate_trace(duration, mean, drops, seed) == t


def test_errors():
    with pytest.raises(TraceGenerationError):
        generate_trace(target_mean=100.0)
    with pytest.raises(TraceGenerationError):
        generate_trace(drops=(800.0,))
    with pytest.raises(TraceGenerationError):
        generate_trace(duration=0.0)
    with pytest.raises(TraceGenerationError):
        check_mean(reference_trace(), 2000.0)


def test_staircase_only_trace():
    t = generate_trace(duration=100.0, target_mean=1000.0, drops=(), seed=4)
    assert abs(t.mean() - 1000.0) <= 10.0
    assert len(t.points) >= 3
