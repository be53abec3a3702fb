"""Condition variable with delegated condition evaluation.

Instead of waking threads blindly and letting each one re-check its condition,
a :class:`DceCondVar` keeps a FIFO wait list of nodes that carry the waiter's
predicate.  Whoever signals walks that list under the lock, evaluates the
registered predicates, and wakes only waiters whose condition actually holds:
``signal_dce`` stops at the first ready waiter, ``broadcast_dce`` wakes every
ready one.  ``broadcast_all`` keeps the conventional wake-everyone semantics
(useful for barriers, where evaluating predicates that are all true is pure
overhead).

Protocol
--------
All shared state read by predicates must be protected by a single user lock,
and signalers must hold that lock when calling ``signal_dce`` /
``broadcast_dce`` / ``broadcast_all``.  That requirement is what makes the
delegated evaluation sound: the state a predicate reads cannot change between
the scan and the decision to wake.  Violations raise in debug runs (python
without ``-O``); with a plain ``threading.Lock`` the check is best-effort
since ownership is not tracked.

``wait_dce`` guarantees its predicate is true, under the lock, at the moment
it returns.  The one window the lock cannot close is between a signaler
choosing a waiter and that waiter re-acquiring the lock; if a third thread
sneaks in and falsifies the condition, the waiter counts a futile wakeup,
forwards the consumed wakeup to the first other waiter whose predicate holds,
re-registers at the tail of the list, and parks again.  In workloads where a
true condition is only ever consumed by the thread waiting for it, that path
never triggers and futile wakeups are exactly zero.

Predicates run on whatever thread performs the scan: the signaler, a
forwarding waiter, or the registering thread itself on the no-wait fast path.
They must be pure (read only lock-protected state, no blocking, no lock
acquisition, no side effects), and a predicate that raises does so on the
scanning thread.
"""

from __future__ import annotations

import enum
import threading
from collections import deque
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple, Optional

from .parking import ParkToken

__all__ = [
    "CondVarStats",
    "DceCondVar",
    "NodeStatus",
    "SignalOutcome",
    "SignalResult",
    "WaitMode",
    "WaitNode",
]

Predicate = Callable[[], bool]
Action = Callable[[], Any]


class WaitMode(enum.Enum):
    DCE = "dce"        # predicate-carrying waiter, condition-holds-on-return
    LEGACY = "legacy"  # conventional waiter: any wakeup returns, caller re-checks
    RCV = "rcv"        # predicate plus delegated action


class NodeStatus(enum.Enum):
    WAITING = "waiting"
    SIGNALED = "signaled"
    ACTION_DONE = "action_done"


class SignalOutcome(enum.Enum):
    WOKE = "woke"              # one waiter's predicate held and it was woken
    NONE_READY = "none_ready"  # waiters exist but no predicate held
    EMPTY = "empty"            # no waiters at all


class SignalResult(NamedTuple):
    outcome: SignalOutcome
    woken: Optional[int]  # registration id of the woken waiter, if any


@dataclass(frozen=True)
class CondVarStats:
    """Snapshot of the condvar's monotonic counters.

    ``predicates_evaluated`` counts scan-side evaluations only (signal,
    broadcast and forwarding scans), not the checks a waiter performs on its
    own behalf.  ``futile_wakeups`` counts delivered wakeups after which the
    woken waiter found its predicate false and re-blocked, so it can never
    exceed ``signals_sent``.
    """

    signals_sent: int = 0
    predicates_evaluated: int = 0
    futile_wakeups: int = 0
    broadcasts: int = 0


class WaitNode:
    """One waiter registration in the wait list.

    A node lives for a single park/wake cycle: once resolved (or withdrawn by
    its owner after a spurious return) it never re-enters the list; a waiter
    that must block again registers a fresh node.  ``result`` and ``fault``
    are populated only when a delegated action ran (status ACTION_DONE).
    """

    __slots__ = ("predicate", "action", "token", "status", "result", "fault", "mode", "seq")

    def __init__(self, predicate: Predicate, mode: WaitMode, action: Optional[Action] = None):
        self.predicate = predicate
        self.action = action
        self.token = ParkToken()
        self.status = NodeStatus.WAITING
        self.result = None
        self.fault: Optional[BaseException] = None
        self.mode = mode
        self.seq = -1  # assigned at registration


def _always_ready() -> bool:
    """Implicit predicate of legacy waiters: any signal may take them."""
    return True


def _lock_is_held(lock) -> bool:
    # Best effort: RLock exposes ownership, a plain Lock only locked-ness.
    is_owned = getattr(lock, "_is_owned", None)
    if is_owned is not None:
        return is_owned()
    locked = getattr(lock, "locked", None)
    if locked is not None:
        return locked()
    return True


class DceCondVar:
    """Condition variable holding a FIFO list of predicate-carrying waiters.

    The list structure is protected by a short internal guard so it stays
    intact even under API misuse, but the *correctness* of delegated
    evaluation still requires callers to honour the lock protocol described
    in the module docstring.  The guard is never held across blocking.
    """

    __slots__ = (
        "_guard",
        "_waiters",
        "_next_seq",
        "_signals_sent",
        "_predicates_evaluated",
        "_futile_wakeups",
        "_broadcasts",
        "_test_hooks",
    )

    def __init__(self) -> None:
        self._guard = threading.Lock()
        self._waiters: deque[WaitNode] = deque()
        self._next_seq = 0
        self._signals_sent = 0
        self._predicates_evaluated = 0
        self._futile_wakeups = 0
        self._broadcasts = 0
        # Optional dict of scheduling instrumentation callbacks ("pre_park",
        # "post_park"), used by the deterministic schedule tests.
        self._test_hooks: Optional[dict] = None

    # ------------------------------------------------------------------
    # waiter side
    # ------------------------------------------------------------------

    def wait_dce(self, lock, predicate: Predicate) -> int:
        """Block until ``predicate`` is true; it holds, under ``lock``, on return.

        Returns immediately (registering nothing) when the predicate is
        already true.  The return value is the number of futile wakeups this
        call absorbed internally, 0 in the common case; callers that do not
        track wakeup statistics can ignore it.
        """
        self._require_held(lock, "wait_dce")
        if predicate():
            return 0
        futile = 0
        while True:
            node = self._register(predicate, WaitMode.DCE)
            if not self._block_on(node, lock, predicate):
                # Withdrew the registration ourselves after a spurious return
                # found the predicate true.
                return futile
            if predicate():
                return futile
            # Signal-to-wake window: the state changed before this thread got
            # the lock back.  Count it, hand the consumed wakeup to the first
            # other eligible waiter, and queue up again at the tail.
            futile += 1
            self._note_futile()
            self._wake_first()

    def wait_legacy(self, lock) -> None:
        """Conventional wait: block once, return on any wakeup.

        No predicate guarantee is made: callers must re-check their condition
        in a loop, exactly as with a plain condition variable.  For the
        signaler's scan the waiter counts as always ready, so a
        ``signal_dce`` will happily spend its wakeup on it.
        """
        self._require_held(lock, "wait_legacy")
        node = self._register(_always_ready, WaitMode.LEGACY)
        lock.release()
        self._fire("pre_park", node)
        node.token.park()
        self._fire("post_park", node)
        lock.acquire()
        # A spurious return leaves the registration live; withdraw it.
        self._withdraw(node)

    # ------------------------------------------------------------------
    # signaler side
    # ------------------------------------------------------------------

    def signal_dce(self, lock) -> SignalResult:
        """Wake the first waiter (FIFO order) whose predicate is true.

        Evaluates predicates in arrival order and stops at the first true
        one.  Waiters whose predicates are false are left untouched; if no
        predicate holds nobody is woken, since no waiter could make progress
        while the caller holds the lock anyway.
        """
        self._require_held(lock, "signal_dce")
        return self._wake_first()

    def broadcast_dce(self, lock) -> int:
        """Evaluate every waiter's predicate and wake all whose predicate holds.

        Returns the number woken.  Delegated actions of ready waiters execute
        here, on the calling thread, in FIFO order within this single lock
        hold.
        """
        self._require_held(lock, "broadcast_dce")
        woken = 0
        with self._guard:
            self._broadcasts += 1
            for node in list(self._waiters):
                self._predicates_evaluated += 1
                if node.predicate():
                    self._waiters.remove(node)
                    self._resolve_locked(node, run_action=True)
                    woken += 1
        return woken

    def broadcast_all(self, lock) -> int:
        """Wake every waiter without evaluating any predicate.

        Conventional broadcast semantics, intended for barrier-style uses
        where every predicate is expected to be true.  Predicate-carrying
        waiters re-check on their own and re-block (counting a futile wakeup)
        if their condition does not hold.  Returns the number unparked.
        """
        self._require_held(lock, "broadcast_all")
        n = 0
        with self._guard:
            self._broadcasts += 1
            while self._waiters:
                node = self._waiters.popleft()
                self._resolve_locked(node, run_action=False)
                n += 1
        return n

    # ------------------------------------------------------------------
    # introspection
    # ------------------------------------------------------------------

    def stats(self) -> CondVarStats:
        """Consistent snapshot of the counters."""
        with self._guard:
            return CondVarStats(
                signals_sent=self._signals_sent,
                predicates_evaluated=self._predicates_evaluated,
                futile_wakeups=self._futile_wakeups,
                broadcasts=self._broadcasts,
            )

    def waiting_count(self) -> int:
        """Number of currently registered waiters."""
        with self._guard:
            return len(self._waiters)

    # ------------------------------------------------------------------
    # internals (also used by the rcv module)
    # ------------------------------------------------------------------

    def _require_held(self, lock, op: str) -> None:
        if __debug__ and not _lock_is_held(lock):
            raise RuntimeError(f"{op}: the associated lock must be held")

    def _register(self, predicate: Predicate, mode: WaitMode, action: Optional[Action] = None) -> WaitNode:
        node = WaitNode(predicate, mode, action)
        with self._guard:
            node.seq = self._next_seq
            self._next_seq += 1
            self._waiters.append(node)
        return node

    def _withdraw(self, node: WaitNode) -> bool:
        """Remove our own still-waiting registration; False if already resolved."""
        with self._guard:
            if node.status is not NodeStatus.WAITING:
                return False
            self._waiters.remove(node)
            return True

    def _block_on(self, node: WaitNode, lock, predicate: Predicate) -> bool:
        """Park until ``node`` is resolved, riding out spurious returns.

        Called with ``lock`` held and returns with it held.  Returns True
        when a scan resolved the node, False when this thread withdrew the
        registration itself because a spurious return found the predicate
        already true.
        """
        while True:
            lock.release()
            self._fire("pre_park", node)
            node.token.park()
            self._fire("post_park", node)
            lock.acquire()
            with self._guard:
                waiting = node.status is NodeStatus.WAITING
            if not waiting:
                return True
            # Spurious return: the registration is still live.
            if predicate() and self._withdraw(node):
                return False

    def _wake_first(self) -> SignalResult:
        """Scan in FIFO order and wake the first waiter whose predicate holds."""
        with self._guard:
            if not self._waiters:
                return SignalResult(SignalOutcome.EMPTY, None)
            for node in self._waiters:
                self._predicates_evaluated += 1
                if node.predicate():
                    self._waiters.remove(node)
                    self._resolve_locked(node, run_action=True)
                    return SignalResult(SignalOutcome.WOKE, node.seq)
            return SignalResult(SignalOutcome.NONE_READY, None)

    def _resolve_locked(self, node: WaitNode, run_action: bool) -> None:
        # Guard held, node already removed from the list.  Status moves off
        # WAITING in the same guard section as the removal, so a waiter can
        # never observe a half-resolved registration.
        if run_action and node.action is not None:
            self._execute_delegated(node)
        else:
            node.status = NodeStatus.SIGNALED
        self._signals_sent += 1
        node.token.unpark()

    def _execute_delegated(self, node: WaitNode) -> None:
        # The executing thread holds the user lock; the node's predicate was
        # just seen true.  A fault is captured and re-delivered to the waiter
        # rather than unwinding the scan.
        try:
            node.result = node.action()
        except BaseException as exc:
            node.fault = exc
        node.status = NodeStatus.ACTION_DONE

    def _note_futile(self) -> None:
        with self._guard:
            self._futile_wakeups += 1

    def _fire(self, point: str, node: WaitNode) -> None:
        hooks = self._test_hooks
        if hooks is not None:
            fn = hooks.get(point)
            if fn is not None:
                fn(node)
