# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels. Must stay bit-identical to ``slotmc._purepy``."""
from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, calloc, free

cdef int CAP_EXCEEDED = -1
cdef uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL


cdef inline uint64_t _mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t _substream(uint64_t seed, uint64_t index) noexcept nogil:
    return _mix64(seed ^ _mix64((index + 1) * GOLDEN_GAMMA))


cdef inline uint64_t _next(uint64_t* state) noexcept nogil:
    state[0] += GOLDEN_GAMMA
    return _mix64(state[0])


cdef inline uint64_t _bounded(uint64_t* state, uint64_t n) noexcept nogil:
    cdef uint64_t threshold = (0 - n) % n
    cdef uint64_t r
    while True:
        r = _next(state)
        if r >= threshold:
            return r % n


cdef inline int _round(int b, int n, uint64_t* gens, int* slots, char* det, int* occ,
                       bint use_errors, uint64_t threshold, bint always) noexcept nogil:
    cdef int i, successes = 0
    for i in range(n):
        if not det[i]:
            slots[i] = <int>_bounded(&gens[i], <uint64_t>b)
    for i in range(b):
        occ[i] = 0
    for i in range(n):
        occ[slots[i]] += 1
    for i in range(n):
        if occ[slots[i]] != 1:
            det[i] = 0
        elif use_errors and (always or _next(&gens[i]) < threshold):
            det[i] = 0
        else:
            det[i] = 1
            successes += 1
    return successes


cdef int64_t _converge(int b, int n, uint64_t seed, int64_t cap,
                       uint64_t* gens, int* slots, char* det, int* occ) noexcept nogil:
    cdef int i
    cdef int64_t r
    for i in range(n):
        gens[i] = _substream(seed, i)
        det[i] = 0
        slots[i] = 0
    for r in range(1, cap + 1):
        if _round(b, n, gens, slots, det, occ, False, 0, False) == n:
            return r
    return CAP_EXCEEDED


def convergence_rounds(int b, int n, seeds, int64_t cap):
    cdef Py_ssize_t count = len(seeds), k
    cdef uint64_t* seed_buf = <uint64_t*>malloc(max(count, 1) * sizeof(uint64_t))
    cdef int64_t* out = <int64_t*>malloc(max(count, 1) * sizeof(int64_t))
    cdef uint64_t* gens = <uint64_t*>malloc(n * sizeof(uint64_t))
    cdef int* slots = <int*>malloc(n * sizeof(int))
    cdef char* det = <char*>malloc(n * sizeof(char))
    cdef int* occ = <int*>malloc(b * sizeof(int))
    try:
        for k in range(count):
            seed_buf[k] = <uint64_t>seeds[k]
        with nogil:
            for k in range(count):
                if n > b:
                    out[k] = CAP_EXCEEDED
                else:
                    out[k] = _converge(b, n, seed_buf[k], cap, gens, slots, det, occ)
        return [out[k] for k in range(count)]
    finally:
        free(seed_buf); free(out); free(gens); free(slots); free(det); free(occ)


def error_trace(int b, int n, uint64_t seed, int64_t rounds, threshold, bint always):
    cdef uint64_t thr = <uint64_t>threshold
    cdef uint64_t* gens = <uint64_t*>malloc(n * sizeof(uint64_t))
    cdef int* slots = <int*>calloc(n, sizeof(int))
    cdef char* det = <char*>calloc(n, sizeof(char))
    cdef int* occ = <int*>malloc(b * sizeof(int))
    cdef int* trace = <int*>malloc(max(rounds, 1) * sizeof(int))
    cdef int i
    cdef int64_t r
    try:
        for i in range(n):
            gens[i] = _substream(seed, i)
        with nogil:
            for r in range(rounds):
                trace[r] = _round(b, n, gens, slots, det, occ, True, thr, always)
        return [trace[r] for r in range(rounds)]
    finally:
        free(gens); free(slots); free(det); free(occ); free(trace)


def transition_histogram(int b, int n, int d, int64_t samples, uint64_t seed):
    cdef uint64_t gen = seed
    cdef int* perm = <int*>malloc(b * sizeof(int))
    cdef int* slots = <int*>malloc(n * sizeof(int))
    cdef int* occ = <int*>malloc(b * sizeof(int))
    cdef int64_t* hist = <int64_t*>calloc(n + 1, sizeof(int64_t))
    cdef int i, j, tmp, ok
    cdef int64_t s
    try:
        for i in range(b):
            perm[i] = i
        with nogil:
            for s in range(samples):
                for i in range(d):
                    j = i + <int>_bounded(&gen, <uint64_t>(b - i))
                    tmp = perm[i]; perm[i] = perm[j]; perm[j] = tmp
                    slots[i] = perm[i]
                for i in range(d, n):
                    slots[i] = <int>_bounded(&gen, <uint64_t>b)
                for i in range(b):
                    occ[i] = 0
                for i in range(n):
                    occ[slots[i]] += 1
                ok = 0
                for i in range(n):
                    if occ[slots[i]] == 1:
                        ok += 1
                hist[ok] += 1
        return [hist[i] for i in range(n + 1)]
    finally:
        free(perm); free(slots); free(occ); free(hist)


def enumerate_counts(int b, int n, det_slots):
    cdef int d = len(det_slots), m = n - len(det_slots)
    cdef int* slots = <int*>calloc(n, sizeof(int))
    cdef int* occ = <int*>malloc(b * sizeof(int))
    cdef int64_t* hist = <int64_t*>calloc(n + 1, sizeof(int64_t))
    cdef int i, pos, ok
    try:
        for i in range(d):
            slots[i] = det_slots[i]
        with nogil:
            while True:
                for i in range(b):
                    occ[i] = 0
                for i in range(n):
                    occ[slots[i]] += 1
                ok = 0
                for i in range(n):
                    if occ[slots[i]] == 1:
                        ok += 1
                hist[ok] += 1
                # mixed-radix increment over the random stations d..n-1
                pos = d
                while pos < n:
                    slots[pos] += 1
                    if slots[pos] < b:
                        break
                    slots[pos] = 0
                    pos += 1
                if pos == n:
                    break
        return [hist[i] for i in range(n + 1)]
    finally:
        free(slots); free(occ); free(hist)
