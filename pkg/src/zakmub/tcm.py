"""Rate-1-bit-per-real-symbol trellis coded modulation.

Each input bit b_k is encoded through a sliding window b = [b_k, b_{k-1},
b_{k-2}] with binary generator taps g11, g12 into a 4-level amplitude

    s_k = ((-1)^(g11.b) - 3*(-1)^(g12.b)) / 2  in  {-2, -1, 1, 2}

(the 1/2 keeps the levels in the stated set). Levels at even/odd indices
become the real/imaginary parts of complex symbols, normalized by 1/sqrt(5)
to unit average energy. Decoding is maximum-likelihood over the 4-state
trellis (Viterbi, full-frame traceback, zero start state, no tail bits).
"""

import heapq
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import viterbi_path

#: Average energy of a complex symbol built from two uniform {-2,-1,1,2} levels.
SYMBOL_ENERGY = 5.0


@dataclass(frozen=True)
class TcmConfig:
    """Generator taps (most-recent bit first) defining the sliding-window code."""

    g11: tuple = (0, 1, 0)
    g12: tuple = (1, 1, 1)

    def __post_init__(self):
        if len(self.g11) != len(self.g12) or len(self.g11) < 1:
            raise ValueError("generator vectors must be nonempty and of equal length")

    @property
    def window(self) -> int:
        return len(self.g11)

    @property
    def num_states(self) -> int:
        return 2 ** (self.window - 1)


DEFAULT_CODE = TcmConfig()


@lru_cache(maxsize=None)
def _trellis_tables(config: TcmConfig):
    """(next_state, out_level) tables indexed by (state, input bit).

    State encodes the window history [b_{k-1}, ..., b_{k-n+1}] with the most
    recent bit in the least significant position.
    """
    n = config.window
    S = config.num_states
    mask = S - 1
    next_state = np.empty((S, 2), dtype=np.int32)
    out_level = np.empty((S, 2), dtype=np.float64)
    for s in range(S):
        history = [(s >> i) & 1 for i in range(n - 1)]
        for b in (0, 1):
            w = [b] + history
            e1 = sum(g * x for g, x in zip(config.g11, w)) % 2
            e2 = sum(g * x for g, x in zip(config.g12, w)) % 2
            out_level[s, b] = -1 - e1 + 3 * e2  # ((-1)^e1 - 3(-1)^e2) / 2
            next_state[s, b] = (b | (s << 1)) & mask
    return next_state, out_level


def encode_levels(bits: np.ndarray, config: TcmConfig = DEFAULT_CODE) -> np.ndarray:
    """Unnormalized real output levels, one per input bit (zero initial window)."""
    bits = np.asarray(bits, dtype=np.int64) & 1
    e1 = np.convolve(bits, np.asarray(config.g11, dtype=np.int64))[: len(bits)] % 2
    e2 = np.convolve(bits, np.asarray(config.g12, dtype=np.int64))[: len(bits)] % 2
    return (-1 - e1 + 3 * e2).astype(np.float64)


def tcm_encode(bits: np.ndarray, config: TcmConfig = DEFAULT_CODE) -> np.ndarray:
    """Encode 2K bits into K unit-average-energy complex symbols."""
    bits = np.asarray(bits)
    if bits.size % 2 != 0:
        raise ValueError(f"bit count must be even, got {bits.size}")
    s = encode_levels(bits, config)
    return (s[0::2] + 1j * s[1::2]) / np.sqrt(SYMBOL_ENERGY)


def viterbi_decode(received: np.ndarray, scale: float, config: TcmConfig = DEFAULT_CODE,
                   return_metric: bool = False):
    """ML-decode K complex symbols received as scale * codeword + noise.

    Real and imaginary parts are decoded as consecutive trellis steps;
    returns the 2K input bits of the minimum squared-distance path.
    """
    received = np.asarray(received, dtype=np.complex128)
    if received.size == 0:
        raise ValueError("cannot decode an empty symbol sequence")
    r = np.empty(2 * received.size, dtype=np.float64)
    r[0::2] = received.real
    r[1::2] = received.imag
    next_state, out_level = _trellis_tables(config)
    bits, metric = viterbi_path(r, scale / np.sqrt(SYMBOL_ENERGY), next_state, out_level)
    if return_metric:
        return bits, metric
    return bits


def compute_dfree(config: TcmConfig = DEFAULT_CODE, normalized: bool = False) -> float:
    """Free Euclidean distance of the code via product-trellis shortest path.

    Runs Dijkstra over ordered state pairs: paths diverge from a common
    state with differing input bits and the search terminates the first time
    a pair remerges. Returns the distance over the unnormalized alphabet by
    default; ``normalized=True`` rescales to the 1/sqrt(5) constellation.
    """
    next_state, out_level = _trellis_tables(config)
    S = config.num_states
    heap = []
    for q in range(S):
        for b1 in (0, 1):
            for b2 in (0, 1):
                if b1 == b2:
                    continue
                cost = (out_level[q, b1] - out_level[q, b2]) ** 2
                heapq.heappush(heap, (cost, next_state[q, b1], next_state[q, b2]))
    best = {}
    while heap:
        cost, s1, s2 = heapq.heappop(heap)
        if s1 == s2:
            dfree_sq = cost
            break
        if best.get((s1, s2), np.inf) <= cost:
            continue
        best[(s1, s2)] = cost
        for b1 in (0, 1):
            for b2 in (0, 1):
                step = (out_level[s1, b1] - out_level[s2, b2]) ** 2
                heapq.heappush(heap, (cost + step, next_state[s1, b1], next_state[s2, b2]))
    else:
        raise RuntimeError("product trellis search did not remerge")
    if normalized:
        dfree_sq /= SYMBOL_ENERGY
    return float(np.sqrt(dfree_sq))
