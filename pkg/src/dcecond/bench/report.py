"""Machine-readable benchmark output: CSV rows or a JSON report object."""

from __future__ import annotations

import io
import json
from typing import List

from .harness import BenchReport, RunRecord

__all__ = ["CSV_HEADER", "emit_many", "emit_report", "parse_report_json"]

CSV_HEADER = "mode,consumers,run,produced_items,futile_wakeups,duration_s"


def _csv_lines(report: BenchReport) -> List[str]:
    lines = []
    for r in report.records:
        lines.append(
            f"{report.mode},{report.consumers},{r.run},{r.produced_items},"
            f"{r.futile_wakeups},{r.duration_s:.6f}"
        )
    n = len(report.records)
    if n:
        mean_produced = sum(r.produced_items for r in report.records) / n
        mean_duration = sum(r.duration_s for r in report.records) / n
        lines.append(
            f"{report.mode},{report.consumers},mean,{mean_produced:.2f},"
            f"{report.mean_futile():.2f},{mean_duration:.6f}"
        )
    return lines


def _report_dict(report: BenchReport) -> dict:
    return {
        "mode": report.mode,
        "consumers": report.consumers,
        "backend": report.backend,
        "runs": [
            {
                "run": r.run,
                "produced_items": r.produced_items,
                "futile_wakeups": r.futile_wakeups,
                "duration_s": r.duration_s,
                "processed_items": r.processed_items,
                "leftover_items": r.leftover_items,
            }
            for r in report.records
        ],
        "aggregates": {
            "throughput_mean": report.mean_throughput(),
            "throughput_stdev": report.stdev_throughput(),
            "futile_wakeups_mean": report.mean_futile(),
        },
        "errors": list(report.errors),
    }


def emit_report(report: BenchReport, format: str = "csv") -> str:
    """Render one report: CSV rows plus a summary row, or a JSON object."""
    if format == "csv":
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for line in _csv_lines(report):
            out.write(line + "\n")
        return out.getvalue()
    if format == "json":
        return json.dumps(_report_dict(report), indent=2)
    raise ValueError(f"unknown format {format!r}")


def emit_many(reports: List[BenchReport], format: str = "csv") -> str:
    """Render several reports (a sweep): one CSV header, or a JSON array."""
    if format == "csv":
        out = io.StringIO()
        out.write(CSV_HEADER + "\n")
        for report in reports:
            for line in _csv_lines(report):
                out.write(line + "\n")
        return out.getvalue()
    if format == "json":
        return json.dumps([_report_dict(r) for r in reports], indent=2)
    raise ValueError(f"unknown format {format!r}")


def parse_report_json(text: str) -> BenchReport:
    """Inverse of ``emit_report(..., "json")``; counts round-trip exactly."""
    obj = json.loads(text)
    report = BenchReport(
        mode=obj["mode"],
        consumers=obj["consumers"],
        backend=obj["backend"],
        errors=list(obj["errors"]),
    )
    for r in obj["runs"]:
        report.records.append(
            RunRecord(
                run=r["run"],
                produced_items=r["produced_items"],
                futile_wakeups=r["futile_wakeups"],
                duration_s=r["duration_s"],
                processed_items=r["processed_items"],
                leftover_items=r["leftover_items"],
            )
        )
    return report
