"""Shared helpers for the concurrency tests.

TThread captures a worker's return value or exception so the main thread can
re-raise it; ``settle`` polls until a condition becomes true; ``assert_stays``
is the negative-space check that a condition keeps holding for a short window
(used to show a waiter stayed blocked).  HookBoard plugs into the condvar's
test hooks to stage waiter threads at their parking boundaries, which is what
makes the schedule enumeration deterministic.
"""

from __future__ import annotations

import threading
import time
from collections import defaultdict

from dcecond.parking import ParkState

JOIN_TIMEOUT = 10.0


class TThread(threading.Thread):
    """Daemon thread that captures its target's return value or exception."""

    def __init__(self, fn, *args, name=None):
        super().__init__(name=name, daemon=True)
        self._fn = fn
        self._args = args
        self.result = None
        self.error = None

    def run(self):
        try:
            self.result = self._fn(*self._args)
        except BaseException as exc:
            self.error = exc

    def finish(self, timeout=JOIN_TIMEOUT):
        """Join with a deadline; re-raise whatever the thread raised."""
        self.join(timeout)
        if self.is_alive():
            raise AssertionError(f"{self.name or 'thread'} still running after {timeout}s")
        if self.error is not None:
            raise self.error
        return self.result


def spawn(fn, *args, name=None) -> TThread:
    t = TThread(fn, *args, name=name)
    t.start()
    return t


def settle(cond, timeout=JOIN_TIMEOUT, interval=0.0005, what="condition"):
    deadline = time.monotonic() + timeout
    while True:
        if cond():
            return
        if time.monotonic() >= deadline:
            raise AssertionError(f"timed out after {timeout}s waiting for {what}")
        time.sleep(interval)


def assert_stays(cond, duration=0.08, interval=0.002, what="condition"):
    """Assert ``cond`` holds now and keeps holding for ``duration`` seconds."""
    deadline = time.monotonic() + duration
    while time.monotonic() < deadline:
        assert cond(), f"{what} did not hold"
        time.sleep(interval)
    assert cond(), f"{what} did not hold"


class HookBoard:
    """Stages waiter threads at their parking boundaries.

    Installs pre/post-park hooks on a condvar.  Threads whose names appear in
    ``hold_pre`` block after registering but before parking; names in
    ``hold_post`` block after park returns but before the lock is re-acquired
    (the signal-to-wake window).  ``release(name, point)`` lets them through;
    a released gate stays open for later cycles of the same thread.  The
    latest registration of each thread is recorded in ``nodes``.
    """

    def __init__(self, cv, hold_pre=(), hold_post=()):
        self.cv = cv
        self.nodes = {}
        self._hold_pre = set(hold_pre)
        self._hold_post = set(hold_post)
        self._gates = defaultdict(threading.Event)
        cv._test_hooks = {"pre_park": self._pre, "post_park": self._post}

    def _pre(self, node):
        name = threading.current_thread().name
        self.nodes[name] = node
        if name in self._hold_pre:
            self._gates["pre", name].wait(JOIN_TIMEOUT)

    def _post(self, node):
        name = threading.current_thread().name
        if name in self._hold_post:
            self._gates["post", name].wait(JOIN_TIMEOUT)

    def release(self, name, point="pre"):
        self._gates[point, name].set()

    def node(self, name):
        return self.nodes.get(name)

    def parked(self, name) -> bool:
        node = self.nodes.get(name)
        return node is not None and node.token.state is ParkState.PARKED
