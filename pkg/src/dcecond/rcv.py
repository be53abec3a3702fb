"""Delegated actions: hand the guarded critical section to the waker.

:func:`wait_rcv` extends predicate delegation one step further.  The waiter
registers both its predicate and the action that predicate guards; the thread
whose scan finds the predicate true executes the action right there, under
the lock it already holds, and the waiter wakes up with the action's result.
Because the action already ran, the waiter gets no lock back: ``wait_rcv``
returns (or raises) with the lock released, and a caller that needs more of
a critical section must acquire the lock again itself.

The win is the same as in other critical-section delegation schemes: no lock
handoff for the guarded work, and actions of several waiters run back to back
on one thread while the shared data is hot in its cache.

Actions follow the predicate rules (touch only lock-protected state, never
block, never take the lock, since the executor already holds it) and run
exactly once per call, on whichever thread resolves the registration: the
signaler, a broadcasting thread, a forwarding waiter, or the calling thread
itself when the predicate is true on entry.  An action that raises has the
exception captured and re-raised from ``wait_rcv`` on the waiting thread.
"""

from __future__ import annotations

from typing import Any

from .condvar import Action, DceCondVar, NodeStatus, Predicate, WaitMode, WaitNode

__all__ = ["wait_rcv"]


def wait_rcv(cv: DceCondVar, lock, predicate: Predicate, action: Action) -> Any:
    """Run ``action`` under ``lock`` once ``predicate`` holds; return its result.

    Must be called with ``lock`` held; returns (and raises) with the lock
    released, so do not call it inside a ``with lock:`` block.  If the
    predicate is already true the calling thread runs the action inline and
    releases the lock itself; otherwise the action runs on the thread whose
    signal or broadcast finds the predicate true.
    """
    cv._require_held(lock, "wait_rcv")
    if predicate():
        try:
            return action()
        finally:
            lock.release()
    while True:
        node = cv._register(predicate, WaitMode.RCV, action=action)
        status = _park_for_resolution(cv, node, lock)
        if status is NodeStatus.ACTION_DONE:
            if node.fault is not None:
                raise node.fault
            return node.result
        # Woken without delegation (an unconditional broadcast): settle it
        # ourselves under the lock.
        lock.acquire()
        if predicate():
            try:
                return action()
            finally:
                lock.release()
        cv._note_futile()
        cv._wake_first()
        # Still holding the lock, required for re-registration at the tail.


def _park_for_resolution(cv: DceCondVar, node: WaitNode, lock) -> NodeStatus:
    """Release the lock and park until the node leaves WAITING."""
    lock.release()
    while True:
        cv._fire("pre_park", node)
        node.token.park()
        cv._fire("post_park", node)
        with cv._guard:
            status = node.status
        if status is not NodeStatus.WAITING:
            return status
        # Spurious return; the registration is still live, park again.
