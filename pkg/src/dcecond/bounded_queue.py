"""Capacity-bounded FIFO queue built on one lock and one condition variable.

The classic bounded buffer needs either two condition variables (not-full and
not-empty) or a single one signaled with broadcast, waking every producer and
consumer to sort out among themselves who can proceed.  With predicate
delegation one condvar and plain signals suffice: blocked producers register
"there is room", blocked consumers register "there is an item", and each
mutation wakes exactly the first peer whose predicate now holds.
"""

from __future__ import annotations

import threading
from collections import deque
from typing import Any, Optional, Tuple

from .condvar import DceCondVar

__all__ = ["BoundedQueue"]


class BoundedQueue:
    """FIFO queue with a fixed capacity; any number of producers and consumers."""

    def __init__(self, capacity: int) -> None:
        if capacity < 1:
            raise ValueError(f"capacity must be a positive integer, got {capacity!r}")
        self._capacity = capacity
        self._items: deque = deque()
        self._lock = threading.Lock()
        self._cv = DceCondVar()

    @property
    def capacity(self) -> int:
        return self._capacity

    def __len__(self) -> int:
        with self._lock:
            return len(self._items)

    def _has_room(self) -> bool:
        return len(self._items) < self._capacity

    def _has_item(self) -> bool:
        return bool(self._items)

    def enq(self, value: Any) -> None:
        """Append ``value``, blocking while the queue is full."""
        with self._lock:
            self._cv.wait_dce(self._lock, self._has_room)
            self._items.append(value)
            assert len(self._items) <= self._capacity
            self._cv.signal_dce(self._lock)

    def deq(self) -> Any:
        """Remove and return the head, blocking while the queue is empty."""
        with self._lock:
            self._cv.wait_dce(self._lock, self._has_item)
            value = self._items.popleft()
            self._cv.signal_dce(self._lock)
            return value

    def try_enq(self, value: Any) -> bool:
        """Append without blocking; False when the queue is full."""
        with self._lock:
            if len(self._items) >= self._capacity:
                return False
            self._items.append(value)
            self._cv.signal_dce(self._lock)
            return True

    def try_deq(self) -> Tuple[bool, Optional[Any]]:
        """Pop without blocking: (True, value), or (False, None) when empty."""
        with self._lock:
            if not self._items:
                return False, None
            value = self._items.popleft()
            self._cv.signal_dce(self._lock)
            return True, value
