"""Superposed transmission on two unbiased bases and the SIC/turbo receiver.

The transmitter mounts a full frame x1 on basis S1 and a sparse frame x2
(first ceil(delta*MN) positions) on basis S2, with amplitude split
sqrt(alpha) / sqrt(1-alpha). The receiver matched-filters the combined
output, detects the full frame first, cancels it, detects the sparse frame,
and optionally repeats the cancel/re-decode round trip (turbo iterations).

With an empty second frame the split is meaningless: all energy goes to
frame 1 (amplitude 1), which makes the delta = 0 pipeline coincide exactly
with the single-frame precoded baseline.
"""

from dataclasses import dataclass, field

import numpy as np

from .mub import BasisPair
from .tcm import DEFAULT_CODE, TcmConfig, tcm_encode, viterbi_decode

#: Gray-mapped unit-energy 4-QAM; index (b0 << 1) | b1, b0 flips the real sign.
QAM4 = np.array([1 + 1j, 1 - 1j, -1 + 1j, -1 - 1j]) / np.sqrt(2)


def qam4_map(bits: np.ndarray) -> np.ndarray:
    """Pairs of bits to unit-energy 4-QAM symbols."""
    bits = np.asarray(bits)
    if bits.size % 2 != 0:
        raise ValueError(f"bit count must be even, got {bits.size}")
    return QAM4[(bits[0::2] << 1) | bits[1::2]]


def _qam4_bits(indices: np.ndarray) -> np.ndarray:
    bits = np.empty(2 * indices.size, dtype=np.uint8)
    bits[0::2] = (indices >> 1) & 1
    bits[1::2] = indices & 1
    return bits


def frame2_support(mn: int, delta: float) -> np.ndarray:
    """Indices carrying second-frame symbols: the first ceil(delta*MN) slots."""
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    return np.arange(int(np.ceil(delta * mn)))


def frame_amplitudes(alpha: float, support_size: int):
    """(beta1, beta2) = (sqrt(alpha), sqrt(1-alpha)); (1, 0) when frame 2 is empty."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if support_size == 0:
        return 1.0, 0.0
    return np.sqrt(alpha), np.sqrt(1.0 - alpha)


@dataclass(frozen=True)
class SuperposedFrame:
    """Two symbol frames sharing one transmission; x2 is zero off its support."""

    x1: np.ndarray
    x2: np.ndarray
    alpha: float
    delta: float

    def __post_init__(self):
        if self.x1.shape != self.x2.shape:
            raise ValueError("x1 and x2 must have equal length")
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")

    @property
    def support(self) -> np.ndarray:
        return frame2_support(len(self.x1), self.delta)


def transmit(frame: SuperposedFrame, Q, bases: BasisPair) -> np.ndarray:
    """x = Q (beta1 S1 x1 + beta2 S2 x2); Q=None skips the precoder rotation."""
    beta1, beta2 = frame_amplitudes(frame.alpha, len(frame.support))
    u = beta1 * (bases.S1 @ frame.x1) + beta2 * (bases.S2 @ frame.x2)
    return u if Q is None else Q @ u


def matched_filter(yprime: np.ndarray, S_i: np.ndarray) -> np.ndarray:
    """Project onto a basis: S_i^H y'. Unitary, so no noise enhancement."""
    return S_i.conj().T @ yprime


def detect_uncoded(z: np.ndarray, beta_i: float, alphabet: np.ndarray = QAM4) -> np.ndarray:
    """Entrywise nearest constellation point for z = beta_i * symbols + noise.

    Ties break toward the lowest constellation index (argmin keeps the first
    minimum).
    """
    if beta_i <= 0:
        raise ValueError(f"amplitude must be positive, got {beta_i}")
    idx = _nearest(z, beta_i, alphabet)
    return alphabet[idx]


def _nearest(z: np.ndarray, beta_i: float, alphabet: np.ndarray) -> np.ndarray:
    d = np.abs(np.asarray(z)[:, None] - beta_i * alphabet[None, :])
    return np.argmin(d, axis=1)


def cancel(yprime: np.ndarray, beta_i: float, S_i: np.ndarray, xhat_i: np.ndarray) -> np.ndarray:
    """Subtract a detected frame's contribution: y' - beta_i S_i xhat_i."""
    return yprime - beta_i * (S_i @ xhat_i)


@dataclass
class IterationSnapshot:
    """Receiver state after one detection stage (stage 0 = initial SIC pass)."""

    bits1: np.ndarray
    bits2: np.ndarray
    symbols1: np.ndarray
    symbols2: np.ndarray
    errors1: int = None
    errors2: int = None


@dataclass
class DetectionResult:
    """Final payloads plus the per-stage history of a SIC/turbo run."""

    bits1: np.ndarray
    bits2: np.ndarray
    iterations: list = field(default_factory=list)


def _decode_frame(z: np.ndarray, beta: float, mode: str, code: TcmConfig):
    """Decode one frame segment; returns (bits, re-encoded symbols)."""
    if mode == "tcm":
        bits = viterbi_decode(z, beta, code)
        return bits, tcm_encode(bits, code)
    idx = _nearest(z, beta, QAM4)
    return _qam4_bits(idx), QAM4[idx]


def sic_receive(y: np.ndarray, W, bases: BasisPair, alpha: float, delta: float,
                mode: str = "tcm", turbo_iters: int = 2,
                truth: tuple = None, code: TcmConfig = DEFAULT_CODE) -> DetectionResult:
    """Successive interference cancellation with turbo re-decoding rounds.

    Parameters
    ----------
    y : received frame; combined with W when W is given (y' = W y), taken
        as already-combined otherwise.
    turbo_iters : number of full re-encode/cancel/re-decode rounds after the
        initial SIC pass (0 = single pass).
    truth : optional (bits1, bits2) ground truth; fills per-stage error counts.

    Frame 1 (full, higher power) is always detected first. In tcm mode the
    cancelled contribution is the re-encoded decoded bits; in uncoded mode it
    is the hard symbol decisions.
    """
    if mode not in ("tcm", "uncoded"):
        raise ValueError(f"mode must be 'tcm' or 'uncoded', got {mode!r}")
    if turbo_iters < 0:
        raise ValueError(f"turbo_iters must be nonnegative, got {turbo_iters}")
    yprime = np.asarray(y, dtype=np.complex128) if W is None else np.asarray(W) @ np.asarray(y)
    mn = yprime.shape[0]
    support = frame2_support(mn, delta)
    beta1, beta2 = frame_amplitudes(alpha, len(support))
    have_frame2 = len(support) > 0 and beta2 > 0

    result = DetectionResult(bits1=None, bits2=np.zeros(0, dtype=np.uint8), iterations=[])

    def decode_frame1(residual):
        return _decode_frame(matched_filter(residual, bases.S1), beta1, mode, code)

    def decode_frame2(residual):
        z2 = matched_filter(residual, bases.S2)[support]
        bits2, syms2 = _decode_frame(z2, beta2, mode, code)
        x2hat = np.zeros(mn, dtype=np.complex128)
        x2hat[support] = syms2
        return bits2, x2hat

    def snapshot(bits1, bits2, x1hat, x2hat):
        snap = IterationSnapshot(bits1=bits1, bits2=bits2,
                                 symbols1=x1hat, symbols2=x2hat[support].copy())
        if truth is not None:
            snap.errors1 = int(np.count_nonzero(bits1 != truth[0]))
            snap.errors2 = int(np.count_nonzero(bits2 != truth[1]))
        result.iterations.append(snap)

    bits1, x1hat = decode_frame1(yprime)
    x2hat = np.zeros(mn, dtype=np.complex128)
    bits2 = np.zeros(0, dtype=np.uint8)
    if have_frame2:
        bits2, x2hat = decode_frame2(cancel(yprime, beta1, bases.S1, x1hat))
    snapshot(bits1, bits2, x1hat, x2hat)

    for _ in range(turbo_iters):
        if have_frame2:
            bits1, x1hat = decode_frame1(cancel(yprime, beta2, bases.S2, x2hat))
            bits2, x2hat = decode_frame2(cancel(yprime, beta1, bases.S1, x1hat))
        snapshot(bits1, bits2, x1hat, x2hat)

    result.bits1 = bits1
    result.bits2 = bits2
    return result
