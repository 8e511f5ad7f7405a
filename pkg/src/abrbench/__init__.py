"""Simulation and benchmarking harness for HTTP adaptive-streaming rate adaptation.

>>> from abrbench import DEFAULT_LADDER, SessionConfig, make_logic, reference_trace, run_session, summarize
>>> log = run_session(SessionConfig(segment_duration=2), reference_trace(), DEFAULT_LADDER, make_logic("dashjs"))
>>> report = summarize(log)
"""

__version__ = "0.1.0"

from .model import (DEFAULT_LADDER, BandwidthTrace, Ladder, ModelError, ParseError, Representation,
                    SessionConfig, format_trace, index_for_bandwidth, load_ladder, load_trace,
                    parse_trace, save_trace)
from .netsim import DownloadRecord, Link, bandwidth_at, download, emit_shaping_script, transfer_time
from .adaptation import (LOGIC_NAMES, AdaptationContext, AdaptationLogic, Decision, make_logic,
                         default_params)
from .engine import SegmentRecord, SessionLog, StallInterval, run_session, startup_delay
from .metrics import (SummaryReport, avg_buffer, inefficiency, instability, media_throughput,
                      summarize, switch_stats)
from .tracegen import generate_trace, reference_trace

__all__ = [
    "DEFAULT_LADDER",
    "BandwidthTrace",
    "Ladder",
    "ModelError",
    "ParseError",
    "Representation",
    "SessionConfig",
    "format_trace",
    "index_for_bandwidth",
    "load_ladder",
    "load_trace",
    "parse_trace",
    "save_trace",
    "DownloadRecord",
    "Link",
    "bandwidth_at",
    "download",
    "emit_shaping_script",
    "transfer_time",
    "LOGIC_NAMES",
    "AdaptationContext",
    "AdaptationLogic",
    "Decision",
    "make_logic",
    "default_params",
    "SegmentRecord",
    "SessionLog",
    "StallInterval",
    "run_session",
    "startup_delay",
    "SummaryReport",
    "avg_buffer",
    "inefficiency",
    "instability",
    "media_throughput",
    "summarize",
    "switch_stats",
    "generate_trace",
    "reference_trace",
]
