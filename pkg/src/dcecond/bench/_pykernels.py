"""Pure-Python benchmark kernels, the fallback when the extension is absent.

Same API as ``_ckernels``: a padded slot array plus the producer's local-work
loop.  Slot reads and writes are single bytecode operations on a memoryview,
atomic under the GIL; the compiled twin uses real atomics and spins with the
GIL released.
"""

import time

BACKEND = "pure"

_MASK = (1 << 64) - 1
_SEED_FALLBACK = 0x9E3779B97F4A7C15


class SlotArray:
    """N integer mailbox cells spaced ``pad_bytes`` apart (one per consumer)."""

    def __init__(self, n, pad_bytes=64):
        if n < 1:
            raise ValueError(f"need at least one slot, got {n!r}")
        if pad_bytes < 8:
            raise ValueError(f"pad_bytes must be >= 8, got {pad_bytes!r}")
        self._stride = pad_bytes // 8
        self._cells = memoryview(bytearray(n * self._stride * 8)).cast("q")
        self.n = n

    def load(self, i):
        if not 0 <= i < self.n:
            raise IndexError(i)
        return self._cells[i * self._stride]

    def store(self, i, v):
        if not 0 <= i < self.n:
            raise IndexError(i)
        self._cells[i * self._stride] = v

    def spin_until_zero(self, i, max_polls):
        """Poll slot ``i`` until it reads 0; False if max_polls exhausted."""
        if not 0 <= i < self.n:
            raise IndexError(i)
        idx = i * self._stride
        cells = self._cells
        for _ in range(max_polls):
            if cells[idx] == 0:
                return True
            time.sleep(0)  # yield so the slot's owner can drain it
        return False

    def snapshot(self):
        return [self._cells[i * self._stride] for i in range(self.n)]


def work_loop(state, iters):
    """Advance a xorshift64 generator ``iters`` steps; returns the new state."""
    state &= _MASK
    if state == 0:
        state = _SEED_FALLBACK
    for _ in range(iters):
        state ^= (state << 13) & _MASK
        state ^= state >> 7
        state ^= (state << 17) & _MASK
    return state
