"""Producer/consumer benchmark harness with legacy and dce notification modes."""

from .harness import (
    BenchConfig,
    BenchReport,
    RunRecord,
    producer_plan,
    run_benchmark,
    run_consumer_dce,
    run_consumer_legacy,
    run_producer,
)
from .report import emit_many, emit_report, parse_report_json

__all__ = [
    "BenchConfig",
    "BenchReport",
    "RunRecord",
    "emit_many",
    "emit_report",
    "parse_report_json",
    "producer_plan",
    "run_benchmark",
    "run_consumer_dce",
    "run_consumer_legacy",
    "run_producer",
]
