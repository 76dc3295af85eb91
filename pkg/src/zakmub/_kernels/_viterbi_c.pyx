# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled Viterbi kernel; semantics identical to _viterbi_py.viterbi_path."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

cdef double _INF = 1e300


def viterbi_path(r, double amp, next_state, out_level):
    """See zakmub._kernels._viterbi_py.viterbi_path for the contract."""
    cdef double[::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef int[:, ::1] ns = np.ascontiguousarray(next_state, dtype=np.int32)
    cdef double[:, ::1] out = np.ascontiguousarray(out_level, dtype=np.float64)
    cdef Py_ssize_t L = rv.shape[0]
    cdef Py_ssize_t S = ns.shape[0]

    prev_state_arr = np.zeros((L, S), dtype=np.int32)
    prev_bit_arr = np.zeros((L, S), dtype=np.uint8)
    bits_arr = np.empty(L, dtype=np.uint8)
    pm_arr = np.full(S, _INF, dtype=np.float64)
    new_arr = np.empty(S, dtype=np.float64)

    cdef int[:, ::1] prev_state = prev_state_arr
    cdef unsigned char[:, ::1] prev_bit = prev_bit_arr
    cdef unsigned char[::1] bits = bits_arr
    cdef double[::1] pm = pm_arr
    cdef double[::1] new = new_arr

    cdef Py_ssize_t t, s, b, best
    cdef int tgt
    cdef double rt, m, d, cand

    pm[0] = 0.0
    for t in range(L):
        rt = rv[t]
        for s in range(S):
            new[s] = _INF
        for s in range(S):
            m = pm[s]
            if m >= _INF:
                continue
            for b in range(2):
                d = rt - amp * out[s, b]
                cand = m + d * d
                tgt = ns[s, b]
                if cand < new[tgt]:
                    new[tgt] = cand
                    prev_state[t, tgt] = <int> s
                    prev_bit[t, tgt] = <unsigned char> b
        pm[:] = new

    best = 0
    for s in range(1, S):
        if pm[s] < pm[best]:
            best = s

    s = best
    for t in range(L - 1, -1, -1):
        bits[t] = prev_bit[t, s]
        s = prev_state[t, s]
    return bits_arr, float(pm[best])
