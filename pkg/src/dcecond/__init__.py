"""Condition variables with delegated condition evaluation.

Waiters register the predicate they are waiting on; signalers evaluate those
predicates under the lock and wake only threads whose condition holds,
eliminating futile wakeups and the thundering herd they cause.  The package
also provides delegated action execution (:func:`wait_rcv`), a bounded queue
built on a single condvar, and a producer/consumer benchmark harness
(``dcecond.bench``, CLI entry point ``bench``).
"""

from .bounded_queue import BoundedQueue
from .condvar import (
    CondVarStats,
    DceCondVar,
    SignalOutcome,
    SignalResult,
    WaitMode,
)
from .parking import ParkState, ParkToken
from .rcv import wait_rcv

__all__ = [
    "BoundedQueue",
    "CondVarStats",
    "DceCondVar",
    "ParkState",
    "ParkToken",
    "SignalOutcome",
    "SignalResult",
    "WaitMode",
    "wait_rcv",
]

__version__ = "0.1.0"
