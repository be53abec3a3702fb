"""Command-line front end for the producer/consumer benchmark."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Tuple

from .harness import BenchConfig, run_benchmark
from .report import emit_many, emit_report


def _parse_sweep(text: str) -> Tuple[int, int, int]:
    try:
        a, b, step = (int(part) for part in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must look like A:B:STEP, got {text!r}")
    if a < 1 or b < a or step < 1:
        raise argparse.ArgumentTypeError(f"sweep needs 1 <= A <= B and STEP >= 1, got {text!r}")
    return a, b, step


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="bench",
        description="Producer/consumer condition-variable benchmark: throughput and futile wakeups.",
    )
    p.add_argument("--mode", choices=("legacy", "dce"), default="dce",
                   help="notification scheme: broadcast-everyone or predicate-targeted signal")
    p.add_argument("--consumers", type=int, default=4, metavar="N",
                   help="number of consumer threads (one producer is always added)")
    p.add_argument("--runs", type=int, default=7, metavar="R",
                   help="independent repetitions per configuration")
    p.add_argument("--duration", type=float, default=5.0, metavar="SECONDS",
                   help="length of each run")
    p.add_argument("--max-work", type=int, default=512, metavar="K",
                   help="producer local work is uniform in [0, K) work-loop steps")
    p.add_argument("--seed", type=int, default=0x5EED, metavar="S",
                   help="seed for the producer's slot/work sequence")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--sweep", type=_parse_sweep, metavar="A:B:STEP",
                   help="run a range of consumer counts instead of --consumers")
    p.add_argument("--backend", choices=("auto", "compiled", "pure"), default="auto",
                   help="kernel backend for slots and local work")
    p.add_argument("--pad-bytes", type=int, default=64, metavar="B",
                   help="slot padding (cache line size)")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    if args.sweep is not None:
        a, b, step = args.sweep
        counts = list(range(a, b + 1, step))
    else:
        counts = [args.consumers]

    reports = []
    try:
        for consumers in counts:
            config = BenchConfig(
                mode=args.mode,
                consumers=consumers,
                duration_per_run=args.duration,
                runs=args.runs,
                max_work_iters=args.max_work,
                rng_seed=args.seed,
                pad_bytes=args.pad_bytes,
                backend=args.backend,
            )
            config.validate()
            reports.append(run_benchmark(config))
    except (ValueError, RuntimeError) as exc:
        print(f"bench: {exc}", file=sys.stderr)
        return 2

    if len(reports) == 1 and args.sweep is None:
        print(emit_report(reports[0], args.format), end="")
    else:
        print(emit_many(reports, args.format), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
