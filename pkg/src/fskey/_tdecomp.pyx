# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled T-decomposition kernel.

Same round-based regrouping as :mod:`fskey._tdecomp_py`, with tokens held in
a C int64 array compacted in place and per-round recipe interning keyed by a
packed (run length, follower) integer.
"""

from libc.stdlib cimport free, malloc

MAX_INPUT = 2_000_000


def decompose_counts(bytes data):
    """Expansion counts k_1..k_m of the T-decomposition of ``data``."""
    cdef Py_ssize_t n = len(data)
    if n == 0:
        raise ValueError("cannot decompose an empty string")
    if n > MAX_INPUT:
        raise ValueError(f"input longer than {MAX_INPUT} bytes")

    cdef long long *tokens = <long long *> malloc(n * sizeof(long long))
    if tokens == NULL:
        raise MemoryError()
    cdef const unsigned char[:] view = data
    cdef Py_ssize_t m = n
    cdef Py_ssize_t i, j, out, q
    cdef long long p, tok, last, next_id = 256
    cdef long long r, k, kp1, key, pack
    cdef object tid
    cdef dict recipes
    cdef list counts = []

    for i in range(n):
        tokens[i] = view[i]
    # recipe key: run * pack + follower + 2, follower -2 marks a power block;
    # ids stay below 256 + n, so pack clears the follower slot
    pack = n + 300

    try:
        while m > 1:
            p = tokens[m - 2]
            j = m - 3
            while j >= 0 and tokens[j] == p:
                j -= 1
            k = m - 2 - j
            counts.append(k)
            kp1 = k + 1

            recipes = {}
            out = 0
            i = 0
            while i <= j:
                tok = tokens[i]
                if tok != p:
                    tokens[out] = tok
                    out += 1
                    i += 1
                    continue
                r = 1
                i += 1
                while tokens[i] == p:  # region ends with a non-p token
                    r += 1
                    i += 1
                while r >= kp1:
                    key = kp1 * pack  # follower slot -2 + 2
                    tid = recipes.get(key)
                    if tid is None:
                        tid = next_id
                        next_id += 1
                        recipes[key] = tid
                    tokens[out] = <long long> tid
                    out += 1
                    r -= kp1
                if r:
                    key = r * pack + tokens[i] + 2
                    i += 1
                    tid = recipes.get(key)
                    if tid is None:
                        tid = next_id
                        next_id += 1
                        recipes[key] = tid
                    tokens[out] = <long long> tid
                    out += 1

            last = tokens[m - 1]
            if last == p:
                key = kp1 * pack
            else:
                key = k * pack + last + 2
            tid = recipes.get(key)
            if tid is None:
                tid = next_id
                next_id += 1
                recipes[key] = tid
            tokens[out] = <long long> tid
            out += 1
            m = out
    finally:
        free(tokens)

    return counts
