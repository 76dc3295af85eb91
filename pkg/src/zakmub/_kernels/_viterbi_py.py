"""Pure-Python Viterbi kernel (fallback when the compiled extension is absent).

Mirrors the Cython kernel exactly: same transition iteration order, same
strict-less-than survivor replacement, so both backends produce identical
bits and path metrics for identical inputs.
"""

import numpy as np

BACKEND = "python"

_INF = 1e300


def viterbi_path(r, amp, next_state, out_level):
    """Minimum squared-distance path through a binary-input trellis.

    Parameters
    ----------
    r : float64 array, shape (L,)
        Received real-valued sequence, one trellis step per entry.
    amp : float
        Amplitude applied to the trellis output levels.
    next_state : int array, shape (S, 2)
        Successor state for (state, input bit).
    out_level : float64 array, shape (S, 2)
        Output level emitted on (state, input bit).

    Returns
    -------
    bits : uint8 array, shape (L,)
        Input bits of the best path (start state 0, free terminal state).
    metric : float
        Accumulated squared distance of that path.
    """
    r = np.ascontiguousarray(r, dtype=np.float64)
    L = r.shape[0]
    S = next_state.shape[0]
    ns = np.ascontiguousarray(next_state, dtype=np.int32)
    out = np.ascontiguousarray(out_level, dtype=np.float64)

    prev_state = np.zeros((L, S), dtype=np.int32)
    prev_bit = np.zeros((L, S), dtype=np.uint8)
    pm = [_INF] * S
    pm[0] = 0.0

    for t in range(L):
        rt = r[t]
        new = [_INF] * S
        for s in range(S):
            m = pm[s]
            if m >= _INF:
                continue
            for b in (0, 1):
                d = rt - amp * out[s, b]
                cand = m + d * d
                tgt = ns[s, b]
                if cand < new[tgt]:
                    new[tgt] = cand
                    prev_state[t, tgt] = s
                    prev_bit[t, tgt] = b
        pm = new

    best = 0
    for s in range(1, S):
        if pm[s] < pm[best]:
            best = s

    bits = np.empty(L, dtype=np.uint8)
    s = best
    for t in range(L - 1, -1, -1):
        bits[t] = prev_bit[t, s]
        s = prev_state[t, s]
    return bits, float(pm[best])
