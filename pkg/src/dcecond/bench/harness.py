"""Producer/consumer microbenchmark measuring throughput and futile wakeups.

One producer feeds N consumers through an array of N padded slots, one slot
per consumer (0 = empty, 1 = item pending).  Each iteration the producer
picks a uniformly random slot, spins outside the lock until the owning
consumer has drained it, then writes 1 under the lock and notifies: an
unconditional ``broadcast_all`` in legacy mode, a predicate-targeted
``signal_dce`` in dce mode.  After notifying it burns a random amount of
local work in the work-loop kernel.  Consumers wait for their own slot to
become nonzero and drain it by writing 0.

In legacy mode every broadcast wakes every blocked consumer and all but one
find their slot still empty: those are the futile wakeups the report counts.
In dce mode the producer's signal evaluates the registered slot predicates
and wakes only the one consumer whose item just arrived, so the futile count
is exactly zero.

A benchmark invocation executes several independent runs (fresh state each)
and reports per-run counts plus mean/stddev aggregates.
"""

from __future__ import annotations

import random
import statistics
import threading
import time
from dataclasses import dataclass, field
from typing import Iterator, List, NamedTuple, Optional, Tuple

from ..condvar import DceCondVar
from . import kernels

__all__ = [
    "BenchConfig",
    "BenchReport",
    "ConsumerResult",
    "RunRecord",
    "producer_plan",
    "run_benchmark",
    "run_consumer_dce",
    "run_consumer_legacy",
    "run_producer",
]

MODES = ("legacy", "dce")

_JOIN_GRACE_S = 10.0


@dataclass
class BenchConfig:
    mode: str = "dce"
    consumers: int = 4
    duration_per_run: float = 5.0
    runs: int = 7
    max_work_iters: int = 512
    rng_seed: int = 0x5EED
    pad_bytes: int = 64
    backend: str = "auto"
    spin_polls: int = 256

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.consumers < 1:
            raise ValueError(f"consumers must be >= 1, got {self.consumers!r}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs!r}")
        if self.duration_per_run <= 0:
            raise ValueError(f"duration_per_run must be > 0, got {self.duration_per_run!r}")
        if self.max_work_iters < 0:
            raise ValueError(f"max_work_iters must be >= 0, got {self.max_work_iters!r}")
        if self.spin_polls < 1:
            raise ValueError(f"spin_polls must be >= 1, got {self.spin_polls!r}")


@dataclass(frozen=True)
class RunRecord:
    run: int
    produced_items: int
    futile_wakeups: int
    duration_s: float
    processed_items: int
    leftover_items: int

    @property
    def throughput(self) -> float:
        return self.produced_items / self.duration_s


@dataclass
class BenchReport:
    """Per-run records plus aggregates, all recomputable from the records."""

    mode: str
    consumers: int
    backend: str
    records: List[RunRecord] = field(default_factory=list)
    errors: List[str] = field(default_factory=list)

    def throughputs(self) -> List[float]:
        return [r.throughput for r in self.records]

    def mean_throughput(self) -> float:
        return statistics.fmean(self.throughputs()) if self.records else 0.0

    def stdev_throughput(self) -> float:
        t = self.throughputs()
        return statistics.stdev(t) if len(t) > 1 else 0.0

    def mean_futile(self) -> float:
        if not self.records:
            return 0.0
        return statistics.fmean(r.futile_wakeups for r in self.records)


class ConsumerResult(NamedTuple):
    futile: int
    processed: int


class StopFlag:
    """Monotonic shutdown flag; set under the benchmark lock, read anywhere."""

    __slots__ = ("stopped",)

    def __init__(self) -> None:
        self.stopped = False


def _mix(seed: int, run_index: int) -> int:
    return (seed * 0x9E3779B97F4A7C15 + run_index * 0xD1B54A32D192ED03 + 1) & (2**64 - 1)


def producer_plan(seed: int, run_index: int, n_slots: int, max_work_iters: int) -> Iterator[Tuple[int, int]]:
    """Deterministic stream of (slot index, local-work length) picks.

    The same (seed, run_index) always yields the same sequence, so the
    producer's workload is reproducible even though thread interleavings are
    not.
    """
    rng = random.Random(_mix(seed, run_index))
    while True:
        work = rng.randrange(max_work_iters) if max_work_iters > 0 else 0
        yield rng.randrange(n_slots), work


def run_producer(slots, notify, stop: StopFlag, plan, work_loop, spin_polls: int = 256) -> int:
    """Feed slots per ``plan`` until stopped; returns items produced.

    For each pick: spin outside the lock until the slot is empty, publish the
    item through ``notify`` (which stores 1 and signals under the lock), then
    burn the planned amount of local work.
    """
    produced = 0
    state = 0x243F6A8885A308D3
    for slot, work_iters in plan:
        if stop.stopped:
            break
        while not slots.spin_until_zero(slot, spin_polls):
            if stop.stopped:
                return produced
        notify(slot)
        if work_iters:
            state = work_loop(state, work_iters)
        produced += 1
    return produced


def run_consumer_legacy(slots, index: int, cv: DceCondVar, lock, stop: StopFlag) -> ConsumerResult:
    """Conventional consumer: waits in a re-check loop, counts futile wakeups.

    A wakeup that finds the slot still empty (and no shutdown in progress) is
    futile: the consumer was dragged through a context switch and the lock
    for nothing and goes back to sleep.
    """
    futile = 0
    processed = 0
    while True:
        with lock:
            while slots.load(index) == 0:
                if stop.stopped:
                    return ConsumerResult(futile, processed)
                cv.wait_legacy(lock)
                if slots.load(index) == 0 and not stop.stopped:
                    futile += 1
            slots.store(index, 0)
            processed += 1


def run_consumer_dce(slots, index: int, cv: DceCondVar, lock, stop: StopFlag) -> ConsumerResult:
    """Predicate-registering consumer; woken only when its slot is loaded.

    The futile count comes out of the condvar's own re-check accounting for
    this waiter (the value ``wait_dce`` returns); in this workload only the
    consumer itself ever empties its slot, so it is exactly zero.
    """
    futile = 0
    processed = 0

    def ready() -> bool:
        return slots.load(index) != 0 or stop.stopped

    while True:
        with lock:
            futile += cv.wait_dce(lock, ready)
            if slots.load(index) == 0:
                return ConsumerResult(futile, processed)  # shutdown wakeup
            slots.store(index, 0)
            processed += 1


class _Worker(threading.Thread):
    def __init__(self, fn, *args, name: str):
        super().__init__(name=name, daemon=True)
        self._fn = fn
        self._args = args
        self.value = None
        self.error: Optional[BaseException] = None

    def run(self) -> None:
        try:
            self.value = self._fn(*self._args)
        except BaseException as exc:
            self.error = exc


def _single_run(config: BenchConfig, kern, run_index: int) -> RunRecord:
    slots = kern.SlotArray(config.consumers, config.pad_bytes)
    lock = threading.Lock()
    cv = DceCondVar()
    stop = StopFlag()

    if config.mode == "dce":
        consume = run_consumer_dce

        def notify(slot: int) -> None:
            with lock:
                slots.store(slot, 1)
                cv.signal_dce(lock)

    else:
        consume = run_consumer_legacy

        def notify(slot: int) -> None:
            with lock:
                slots.store(slot, 1)
                cv.broadcast_all(lock)

    consumers = [
        _Worker(consume, slots, i, cv, lock, stop, name=f"consumer-{i}")
        for i in range(config.consumers)
    ]
    plan = producer_plan(config.rng_seed, run_index, config.consumers, config.max_work_iters)
    producer = _Worker(run_producer, slots, notify, stop, plan, kern.work_loop,
                       config.spin_polls, name="producer")

    started: List[_Worker] = []
    try:
        for w in consumers:
            w.start()
            started.append(w)
        t0 = time.monotonic()
        producer.start()
        started.append(producer)
        time.sleep(config.duration_per_run)
    finally:
        # Always tear the run down, even if a spawn failed halfway.
        with lock:
            stop.stopped = True
            cv.broadcast_all(lock)
    wall = time.monotonic() - t0

    deadline = time.monotonic() + _JOIN_GRACE_S
    for w in started:
        w.join(max(0.0, deadline - time.monotonic()))
        if w.is_alive():
            raise RuntimeError(f"{w.name} failed to stop within {_JOIN_GRACE_S:.0f}s")
    for w in started:
        if w.error is not None:
            raise w.error

    produced = producer.value
    results = [w.value for w in consumers]
    futile = sum(r.futile for r in results)
    processed = sum(r.processed for r in results)
    leftover = sum(1 for i in range(config.consumers) if slots.load(i) != 0)
    # Every published item is either drained by its consumer or still sitting
    # in its slot at shutdown.
    assert processed + leftover == produced, (processed, leftover, produced)
    if config.mode == "dce":
        assert cv.stats().futile_wakeups == futile
    return RunRecord(
        run=run_index,
        produced_items=produced,
        futile_wakeups=futile,
        duration_s=wall,
        processed_items=processed,
        leftover_items=leftover,
    )


def run_benchmark(config: BenchConfig) -> BenchReport:
    """Execute ``config.runs`` independent runs and aggregate them.

    A run that fails (e.g. thread spawn failure) is recorded in
    ``report.errors`` and the remaining runs still execute, preserving a
    partial report.
    """
    config.validate()
    kern = kernels.load(config.backend)
    report = BenchReport(mode=config.mode, consumers=config.consumers, backend=kern.BACKEND)
    for run_index in range(config.runs):
        try:
            report.records.append(_single_run(config, kern, run_index))
        except RuntimeError as exc:
            report.errors.append(f"run {run_index}: {exc}")
    return report
