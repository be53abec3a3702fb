"""Per-thread parking, the blocking primitive the condition variable rests on.

A :class:`ParkToken` is a private block/unblock channel owned by one thread.
An ``unpark`` that arrives before ``park`` is remembered, so the pair never
loses a wakeup regardless of ordering; extra notifications coalesce into a
single pending one (binary semaphore semantics).  All platform blocking in
this package happens inside :meth:`ParkToken.park`.
"""

from __future__ import annotations

import enum
import threading

__all__ = ["ParkState", "ParkToken"]


class ParkState(enum.Enum):
    EMPTY = "empty"        # no pending notification, nobody blocked
    NOTIFIED = "notified"  # one notification stored for the next park
    PARKED = "parked"      # the owning thread is blocked in park()


class ParkToken:
    """One thread's block/unblock channel.

    Only the owning thread may call :meth:`park`; :meth:`unpark` may be called
    from any thread, any number of times.  ``park`` may also return without a
    notification when :meth:`inject_spurious` (a test hook) pokes it, so
    callers must re-check their condition after every return.
    """

    __slots__ = ("_mutex", "_gate", "_state")

    def __init__(self) -> None:
        self._mutex = threading.Lock()
        # Handoff gate, held whenever nobody is releasing a parked owner.
        self._gate = threading.Lock()
        self._gate.acquire()
        self._state = ParkState.EMPTY

    @property
    def state(self) -> ParkState:
        """Unsynchronized snapshot of the token state (tests, debugging)."""
        return self._state

    def park(self) -> None:
        """Block until one notification arrives; consume it and return.

        Returns immediately when a notification is already pending.  Two
        simultaneous parkers are a contract violation, detected in debug runs.
        """
        with self._mutex:
            if self._state is ParkState.NOTIFIED:
                self._state = ParkState.EMPTY
                return
            if __debug__ and self._state is ParkState.PARKED:
                raise RuntimeError("park: token is already parked by another thread")
            self._state = ParkState.PARKED
        self._gate.acquire()

    def unpark(self) -> None:
        """Deliver one notification: release a parked owner or store it.

        Notifications do not accumulate; unparking an already-notified token
        is a no-op.
        """
        with self._mutex:
            if self._state is ParkState.PARKED:
                self._state = ParkState.EMPTY
                self._gate.release()
            elif self._state is ParkState.EMPTY:
                self._state = ParkState.NOTIFIED

    def inject_spurious(self) -> bool:
        """Test hook: make a blocked ``park`` return without a notification.

        Returns True if a parked thread was released, False if the token was
        not parked (nothing happens in that case).
        """
        with self._mutex:
            if self._state is not ParkState.PARKED:
                return False
            self._state = ParkState.EMPTY
            self._gate.release()
            return True
