"""QR precoding and MMSE combining that flatten the doubly-spread channel.

Factoring H^H = QR and transmitting x = Q x' turns the link into
y = R^H x' + n; the combiner W = (R R^H + sigma^2 I)^{-1} R then gives
W H Q = (R R^H + sigma^2 I)^{-1} R R^H, which approaches the identity as
sigma^2 -> 0 for a nonsingular channel. Q is unitary, so precoding costs no
transmit energy.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg as sla


class DegenerateChannelError(Exception):
    """Raised when (R R^H + sigma^2 I) is singular (sigma^2 = 0, rank-deficient R)."""


@dataclass(frozen=True)
class PrecoderSet:
    """Factors of H^H and the MMSE combiner built for noise variance sigma2."""

    Q: np.ndarray
    R: np.ndarray
    W: np.ndarray
    sigma2: float


def _diag_phases(R: np.ndarray) -> np.ndarray:
    d = np.diagonal(R)
    mag = np.abs(d)
    safe = np.where(mag > 0, mag, 1.0)
    return np.where(mag > 0, d / safe, 1.0)


def qr_precoder(H: np.ndarray):
    """QR-factor the Hermitian transpose of the channel: H^H = Q R.

    Q is unitary and R upper-triangular with real nonnegative diagonal (the
    phase convention makes the factorization deterministic).
    """
    H = np.asarray(H, dtype=np.complex128)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"channel matrix must be square, got {H.shape}")
    Q, R = sla.qr(H.conj().T)
    phases = _diag_phases(R)
    return Q * phases[None, :], R * phases.conj()[:, None]


def triangular_factor(H: np.ndarray) -> np.ndarray:
    """R alone from H^H = QR, skipping the explicit Q (same phase convention)."""
    H = np.asarray(H, dtype=np.complex128)
    (R,) = sla.qr(H.conj().T, mode="r")
    return R * _diag_phases(R).conj()[:, None]


def gram_cholesky(R: np.ndarray, sigma2: float):
    """Cholesky factor of (R R^H + sigma2 I), for solving without forming W."""
    if sigma2 < 0:
        raise ValueError(f"noise variance must be nonnegative, got {sigma2}")
    R = np.asarray(R, dtype=np.complex128)
    B = sla.lapack.zlauum(R)[0]  # upper triangle of R R^H
    B = np.triu(B) + np.triu(B, 1).conj().T
    B[np.diag_indices_from(B)] += sigma2
    try:
        return sla.cho_factor(B, lower=False)
    except np.linalg.LinAlgError as exc:
        raise DegenerateChannelError(
            f"R R^H + sigma^2 I is singular (sigma2={sigma2})"
        ) from exc


def mmse_combiner(R: np.ndarray, sigma2: float) -> np.ndarray:
    """W = (R R^H + sigma^2 I)^{-1} R."""
    cho = gram_cholesky(R, sigma2)
    return sla.cho_solve(cho, np.asarray(R, dtype=np.complex128))


def build_precoder(H: np.ndarray, sigma2: float) -> PrecoderSet:
    """Factor the channel and build the matched MMSE combiner."""
    Q, R = qr_precoder(H)
    return PrecoderSet(Q=Q, R=R, W=mmse_combiner(R, sigma2), sigma2=sigma2)


def precode(Q: np.ndarray, xprime: np.ndarray) -> np.ndarray:
    """Transmit-side rotation x = Q x' (energy preserving)."""
    Q = np.asarray(Q)
    xprime = np.asarray(xprime)
    if Q.shape[1] != xprime.shape[0]:
        raise ValueError(f"dimension mismatch: Q is {Q.shape}, x' has length {xprime.shape[0]}")
    return Q @ xprime


def combine(W: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Receive-side combining y' = W y."""
    W = np.asarray(W)
    y = np.asarray(y)
    if W.shape[1] != y.shape[0]:
        raise ValueError(f"dimension mismatch: W is {W.shape}, y has length {y.shape[0]}")
    return W @ y
