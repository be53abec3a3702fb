#!/usr/bin/env python3
"""Compare the compiled benchmark kernels against the pure-Python fallback.

Times the producer's work loop and the slot-array hot operations in both
backends, then (optionally, --end-to-end) runs a short dce-mode benchmark on
each to show the effect on end-to-end throughput.
"""

import argparse
import time

from dcecond.bench import BenchConfig, run_benchmark
from dcecond.bench import kernels


def _best_of(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def time_kernels(kern, work_iters, slot_ops):
    work_s = _best_of(lambda: kern.work_loop(12345, work_iters))

    slots = kern.SlotArray(8)

    def slot_churn():
        for i in range(slot_ops):
            idx = i & 7
            slots.store(idx, 1)
            slots.load(idx)
            slots.store(idx, 0)
            slots.spin_until_zero(idx, 1)

    slot_s = _best_of(slot_churn)
    return work_s, slot_s


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--work-iters", type=int, default=2_000_000)
    parser.add_argument("--slot-ops", type=int, default=200_000)
    parser.add_argument("--end-to-end", action="store_true",
                        help="also run a short dce benchmark per backend")
    args = parser.parse_args()

    rows = []
    for name in kernels.available_backends():
        kern = kernels.load(name)
        work_s, slot_s = time_kernels(kern, args.work_iters, args.slot_ops)
        rows.append((name, work_s, slot_s))

    print(f"{'backend':10} {'work_loop':>14} {'slot ops':>14}")
    base = rows[-1]  # pure is always last in available_backends()
    for name, work_s, slot_s in rows:
        print(f"{name:10} {work_s * 1e3:>11.2f} ms {slot_s * 1e3:>11.2f} ms"
              + (f"   ({base[1] / work_s:4.0f}x / {base[2] / slot_s:4.1f}x vs pure)"
                 if name != "pure" else ""))

    if args.end_to_end:
        print()
        print(f"{'backend':10} {'dce throughput':>16}")
        for name in kernels.available_backends():
            report = run_benchmark(
                BenchConfig(mode="dce", consumers=4, runs=3,
                            duration_per_run=1.0, backend=name)
            )
            print(f"{name:10} {report.mean_throughput():>12.0f} items/s")


if __name__ == "__main__":
    main()
