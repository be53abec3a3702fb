# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled benchmark kernels: padded slot array and the local-work loop.

The slot array lives in one 64-byte-aligned allocation with each cell on its
own cache line; loads and stores use acquire/release atomics and the
spin-wait runs with the GIL released so slot owners can make progress.
"""

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    """
    #include <stdint.h>
    #include <stdlib.h>

    static inline int64_t dcx_load(const int64_t *p) {
        return __atomic_load_n(p, __ATOMIC_ACQUIRE);
    }
    static inline void dcx_store(int64_t *p, int64_t v) {
        __atomic_store_n(p, v, __ATOMIC_RELEASE);
    }
    #if defined(__x86_64__) || defined(__i386__)
      #include <immintrin.h>
      static inline void dcx_pause(void) { _mm_pause(); }
    #else
      static inline void dcx_pause(void) {}
    #endif
    static inline void *dcx_alloc(size_t size) {
        void *p = NULL;
        if (posix_memalign(&p, 64, size) != 0) return NULL;
        return p;
    }
    """
    int64_t dcx_load(const int64_t *p) nogil
    void dcx_store(int64_t *p, int64_t v) nogil
    void dcx_pause() nogil
    void *dcx_alloc(size_t size)

cdef extern from "stdlib.h":
    void free(void *ptr)
    void *memset(void *s, int c, size_t n)

BACKEND = "compiled"

DEF SEED_FALLBACK = 0x9E3779B97F4A7C15


cdef class SlotArray:
    """N integer mailbox cells spaced ``pad_bytes`` apart (one per consumer)."""

    cdef int64_t *_cells
    cdef Py_ssize_t _stride  # in int64 units
    cdef readonly Py_ssize_t n

    def __cinit__(self, Py_ssize_t n, Py_ssize_t pad_bytes=64):
        if n < 1:
            raise ValueError(f"need at least one slot, got {n!r}")
        if pad_bytes < 8:
            raise ValueError(f"pad_bytes must be >= 8, got {pad_bytes!r}")
        self._stride = pad_bytes // 8
        self.n = n
        self._cells = <int64_t *>dcx_alloc(n * self._stride * sizeof(int64_t))
        if self._cells == NULL:
            raise MemoryError()
        memset(self._cells, 0, n * self._stride * sizeof(int64_t))

    def __dealloc__(self):
        if self._cells != NULL:
            free(self._cells)

    def load(self, Py_ssize_t i):
        if not 0 <= i < self.n:
            raise IndexError(i)
        return dcx_load(self._cells + i * self._stride)

    def store(self, Py_ssize_t i, int64_t v):
        if not 0 <= i < self.n:
            raise IndexError(i)
        dcx_store(self._cells + i * self._stride, v)

    def spin_until_zero(self, Py_ssize_t i, long max_polls):
        """Poll slot ``i`` until it reads 0; False if max_polls exhausted."""
        if not 0 <= i < self.n:
            raise IndexError(i)
        cdef int64_t *p = self._cells + i * self._stride
        cdef long k
        cdef bint ok = False
        with nogil:
            for k in range(max_polls):
                if dcx_load(p) == 0:
                    ok = True
                    break
                dcx_pause()
        return ok

    def snapshot(self):
        return [dcx_load(self._cells + i * self._stride) for i in range(self.n)]


def work_loop(state, long iters):
    """Advance a xorshift64 generator ``iters`` steps; returns the new state."""
    cdef uint64_t s = <uint64_t>(state & 0xFFFFFFFFFFFFFFFF)
    cdef long k
    if s == 0:
        s = SEED_FALLBACK
    with nogil:
        for k in range(iters):
            s ^= s << 13
            s ^= s >> 7
            s ^= s << 17
    return s
