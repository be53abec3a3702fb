"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with ``pytest -s tests/test_acceptance.py`` to see the per-criterion
lines.  The benchmark criteria share a lazily built measurement matrix
(7 runs x 2 s per mode/consumer-count pair) so nothing is measured twice.
Criteria 2 and 3 only apply on machines with at least 4 hardware threads
and skip below that.
"""

import os
import random
import threading
from collections import Counter, defaultdict
from contextlib import contextmanager

import pytest

from dcecond import BoundedQueue, DceCondVar, wait_rcv
from dcecond.bench import BenchConfig, run_benchmark
from enumeration import drive_forwarding, enumerate_wake_schedules
from support import HookBoard, assert_stays, settle, spawn

BENCH_RUNS = 7
BENCH_DURATION = 2.0
HW_THREADS = os.cpu_count() or 1


@contextmanager
def criterion(num, label):
    try:
        yield
    except BaseException as exc:
        kind = "SKIP" if isinstance(exc, pytest.skip.Exception) else "FAIL"
        detail = f" ({exc})" if kind == "SKIP" else ""
        print(f"[acceptance] criterion {num} ({label}): {kind}{detail}")
        raise
    print(f"[acceptance] criterion {num} ({label}): PASS")


class _Matrix:
    """Lazily measured (mode, consumers) -> BenchReport cache."""

    def __init__(self):
        self._cache = {}

    def report(self, mode, consumers):
        key = (mode, consumers)
        if key not in self._cache:
            self._cache[key] = run_benchmark(
                BenchConfig(
                    mode=mode,
                    consumers=consumers,
                    runs=BENCH_RUNS,
                    duration_per_run=BENCH_DURATION,
                    rng_seed=2026,
                )
            )
        report = self._cache[key]
        assert report.errors == [], report.errors
        return report


@pytest.fixture(scope="module")
def matrix():
    return _Matrix()


def test_criterion_1_dce_zero_futility(matrix):
    with criterion(1, "DCE zero-futility"):
        for consumers in (2, 4, 8):
            report = matrix.report("dce", consumers)
            assert len(report.records) == BENCH_RUNS
            for r in report.records:
                assert r.futile_wakeups == 0, (consumers, r)


def test_criterion_2_legacy_futility_growth(matrix):
    with criterion(2, "legacy futility grows with consumers"):
        if HW_THREADS < 4:
            pytest.skip(f"needs >= 4 hardware threads, have {HW_THREADS}")
        means = [matrix.report("legacy", c).mean_futile() for c in (2, 4, 8)]
        assert means[0] < means[1] < means[2], means


def test_criterion_3_throughput_advantage(matrix):
    with criterion(3, "DCE throughput advantage at 8 consumers"):
        if HW_THREADS < 4:
            pytest.skip(f"needs >= 4 hardware threads, have {HW_THREADS}")
        dce = matrix.report("dce", 8).mean_throughput()
        legacy = matrix.report("legacy", 8).mean_throughput()
        assert dce >= 1.2 * legacy, (dce, legacy)
        if HW_THREADS >= 16:
            dce32 = matrix.report("dce", 32).mean_throughput()
            legacy32 = matrix.report("legacy", 32).mean_throughput()
            assert dce32 >= 2.0 * legacy32, (dce32, legacy32)


def test_criterion_4_single_consumer_parity(matrix):
    with criterion(4, "single-consumer parity"):
        dce = matrix.report("dce", 1).mean_throughput()
        legacy = matrix.report("legacy", 1).mean_throughput()
        assert dce >= 0.7 * legacy, (dce, legacy)


def _predicate_holds_stress(n_waiters, n_dispensers, per_waiter):
    lock = threading.Lock()
    cv = DceCondVar()
    tickets = [0] * n_waiters
    done = [False] * n_waiters
    violations = []

    def waiter(idx):
        for _ in range(per_waiter):
            with lock:
                cv.wait_dce(lock, lambda: tickets[idx] > 0)
                if tickets[idx] <= 0:
                    violations.append(idx)
                tickets[idx] -= 1
        done[idx] = True

    def dispenser(seed):
        rng = random.Random(seed)
        while not all(done):
            with lock:
                tickets[rng.randrange(n_waiters)] += 1
                cv.signal_dce(lock)

    waiters = [spawn(waiter, i, name=f"W{i}") for i in range(n_waiters)]
    dispensers = [spawn(dispenser, 1000 + k, name=f"D{k}") for k in range(n_dispensers)]
    for t in waiters:
        t.finish(timeout=120.0)
    for t in dispensers:
        t.finish(timeout=120.0)
    assert violations == []
    stats = cv.stats()
    # tickets are only consumed by their owner, so futility is impossible
    assert stats.futile_wakeups == 0
    assert stats.futile_wakeups <= stats.signals_sent
    return n_waiters * per_waiter


def test_criterion_5_predicate_holds_on_return():
    with criterion(5, "predicate holds on every wait_dce return"):
        completions = 0
        completions += _predicate_holds_stress(1, 1, 30000)   # 2 threads
        completions += _predicate_holds_stress(6, 2, 7000)    # 8 threads
        completions += _predicate_holds_stress(12, 4, 3000)   # 16 threads
        assert completions >= 100_000


def test_criterion_6_targeted_wakeup_enumeration():
    with criterion(6, "exact wake sets over every interleaving"):
        truth = {"A": False, "B": True, "C": True}
        assert enumerate_wake_schedules(truth, "signal") == 48
        assert enumerate_wake_schedules(truth, "broadcast") == 48


def test_criterion_7_bounded_queue_conservation():
    with criterion(7, "bounded queue conservation and liveness"):
        n_producers = n_consumers = 4
        per_producer = 2500
        for capacity in (1, 2, 8):
            q = BoundedQueue(capacity)
            stop = object()

            def producer(pid):
                for seq in range(per_producer):
                    q.enq((pid, seq))

            def consumer():
                history = []
                while True:
                    item = q.deq()
                    if item is stop:
                        return history
                    history.append(item)

            consumers = [spawn(consumer, name=f"cons-{i}") for i in range(n_consumers)]
            producers = [spawn(producer, pid, name=f"prod-{pid}") for pid in range(n_producers)]
            for t in producers:
                t.finish(timeout=10.0)
            for _ in consumers:
                q.enq(stop)
            histories = [t.finish(timeout=10.0) for t in consumers]

            expected = Counter(
                (pid, seq) for pid in range(n_producers) for seq in range(per_producer)
            )
            assert Counter(i for h in histories for i in h) == expected, capacity
            for history in histories:
                last = defaultdict(lambda: -1)
                for pid, seq in history:
                    assert seq > last[pid], (capacity, pid, seq)
                    last[pid] = seq


def _rcv_stress(n_waiters, per_waiter, n_feeders=2):
    lock = threading.Lock()
    cv = DceCondVar()
    total = n_waiters * per_waiter
    permits = {"n": 0}
    produced = {"n": 0}
    executed = {"n": 0}
    remaining = {"n": total}
    lock_not_held = []

    def action():
        assert lock.locked()
        assert permits["n"] > 0
        permits["n"] -= 1
        executed["n"] += 1
        remaining["n"] -= 1
        return executed["n"]

    def waiter():
        got = []
        for _ in range(per_waiter):
            lock.acquire()
            got.append(wait_rcv(cv, lock, lambda: permits["n"] > 0, action))
        return got

    def feeder():
        while True:
            with lock:
                if remaining["n"] == 0:
                    return
                permits["n"] += 1
                produced["n"] += 1
                cv.signal_dce(lock)

    waiters = [spawn(waiter, name=f"W{i}") for i in range(n_waiters)]
    feeders = [spawn(feeder, name=f"F{k}") for k in range(n_feeders)]
    results = [t.finish(timeout=120.0) for t in waiters]
    for f in feeders:
        f.finish(timeout=120.0)

    assert executed["n"] == total
    receipts = sorted(v for got in results for v in got)
    assert receipts == list(range(1, total + 1))
    assert permits["n"] == produced["n"] - executed["n"]
    assert permits["n"] >= 0
    return total


def test_criterion_8_rcv_exactly_once_and_lock_discipline():
    with criterion(8, "RCV exactly-once and lock discipline"):
        calls = _rcv_stress(8, 1250)
        assert calls >= 10_000

        # staged lock-discipline check: the waiter returns lock-free and the
        # action observed the lock held
        lock = threading.Lock()
        cv = DceCondVar()
        state = {"open": False}
        observed = []

        def action():
            observed.append(lock.locked())
            return "done"

        def waiter():
            lock.acquire()
            return wait_rcv(cv, lock, lambda: state["open"], action)

        t = spawn(waiter, name="staged-rcv")
        settle(lambda: cv.waiting_count() == 1, what="registered")
        with lock:
            state["open"] = True
            cv.signal_dce(lock)
        assert t.finish() == "done"
        assert observed == [True]
        assert lock.acquire(blocking=False)  # waiter came back lock-free
        lock.release()


def test_criterion_9_no_lost_wakeups():
    with criterion(9, "no lost wakeups (forwarding included)"):
        watchdog = 10.0

        # plain wake: eligible waiter returns once signaled
        lock = threading.Lock()
        cv = DceCondVar()
        flag = {"v": False}

        def waiter():
            with lock:
                cv.wait_dce(lock, lambda: flag["v"])

        t = spawn(waiter, name="basic")
        settle(lambda: cv.waiting_count() == 1, what="registered")
        with lock:
            flag["v"] = True
            cv.signal_dce(lock)
        t.finish(timeout=watchdog)

        # wakeup delivered before the waiter finishes parking is not lost
        lock2 = threading.Lock()
        cv2 = DceCondVar()
        flag2 = {"v": False}
        board = HookBoard(cv2, hold_pre=["late"])

        def late_waiter():
            with lock2:
                cv2.wait_dce(lock2, lambda: flag2["v"])

        t2 = spawn(late_waiter, name="late")
        settle(lambda: cv2.waiting_count() == 1, what="registered")
        with lock2:
            flag2["v"] = True
            cv2.signal_dce(lock2)  # waiter has not parked yet
        board.release("late")
        t2.finish(timeout=watchdog)

        # the forwarding path, with and without a delegated action
        drive_forwarding(rcv_second=False, watchdog=watchdog)
        drive_forwarding(rcv_second=True, watchdog=watchdog)
