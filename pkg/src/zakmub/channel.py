"""Doubly-spread multipath channel: random realizations and matrix builders.

The frame is modeled circularly (indices mod MN), with fractional delays
realized by bandlimited sinc interpolation across all MN taps and per-path
linear Doppler phase referenced to the frame start. The compression factor
beta < 1 models faster-than-Nyquist sampling of the baselines; beta = 1 is
the plain Nyquist-grid scheme.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .grid import GridParams


@dataclass(frozen=True)
class PathProfile:
    """Power-delay profile: per-path delay (seconds) and relative power (dB)."""

    delays: tuple
    powers_db: tuple

    def __post_init__(self):
        if len(self.delays) != len(self.powers_db):
            raise ValueError("delays and powers_db must have equal length")
        if len(self.delays) == 0:
            raise ValueError("profile must contain at least one path")
        d = np.asarray(self.delays, dtype=float)
        if np.any(d < 0) or np.any(np.diff(d) < 0):
            raise ValueError("delays must be nonnegative and nondecreasing")

    @property
    def num_paths(self) -> int:
        return len(self.delays)

    def linear_powers(self) -> np.ndarray:
        """dB powers converted to linear and normalized to sum 1."""
        p = 10.0 ** (np.asarray(self.powers_db, dtype=float) / 10.0)
        return p / p.sum()


#: 6-path Vehicular-A power-delay profile.
VEH_A = PathProfile(
    delays=(0.0, 0.31e-6, 0.71e-6, 1.09e-6, 1.73e-6, 2.51e-6),
    powers_db=(0.0, -1.0, -9.0, -10.0, -15.0, -20.0),
)

#: Single line-of-sight path; with nu_max = 0 the time channel is the identity.
SINGLE_PATH = PathProfile(delays=(0.0,), powers_db=(0.0,))

PROFILES = {"veh-a": VEH_A, "single-path": SINGLE_PATH}


@dataclass(frozen=True)
class ChannelRealization:
    """One multipath draw: complex gains, delays (s) and Doppler shifts (Hz)."""

    gains: np.ndarray
    delays: np.ndarray
    dopplers: np.ndarray

    @property
    def num_paths(self) -> int:
        return len(self.gains)


def sample_paths(profile: PathProfile, nu_max: float, rng: np.random.Generator) -> ChannelRealization:
    """Draw one channel realization from a power-delay profile.

    Gains are sqrt(p_i) * exp(j phi_i) with phi_i ~ U[0, 2pi) and the linear
    powers p_i normalized to sum 1; Dopplers are nu_max * cos(theta_i) with
    theta_i ~ U[-pi, pi).
    """
    if nu_max < 0:
        raise ValueError(f"nu_max must be nonnegative, got {nu_max}")
    p = profile.linear_powers()
    phases = rng.uniform(0.0, 2.0 * np.pi, size=profile.num_paths)
    thetas = rng.uniform(-np.pi, np.pi, size=profile.num_paths)
    return ChannelRealization(
        gains=np.sqrt(p) * np.exp(1j * phases),
        delays=np.asarray(profile.delays, dtype=float),
        dopplers=nu_max * np.cos(thetas),
    )


def _wrapped_lags(mn: int) -> np.ndarray:
    """(a - b) mod MN folded into the symmetric range [-MN/2, MN/2)."""
    a = np.arange(mn)
    return ((a[:, None] - a[None, :]) + mn // 2) % mn - mn // 2


def build_time_channel(ch: ChannelRealization, g: GridParams, beta: float = 1.0) -> np.ndarray:
    """Materialize the MN x MN time-domain channel matrix H_t(beta).

    H_t[a, b] = sum_i h_i * exp(2j pi nu_i a beta T_s) * sinc(beta*(a-b) - tau_i/T_s)

    with the lag (a - b) wrapped circularly into the symmetric range. For a
    single path with zero delay and Doppler at beta = 1 this is the identity;
    beta < 1 introduces the faster-than-Nyquist inter-symbol interference.
    """
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    mn = g.MN
    lags = _wrapped_lags(mn)
    a = np.arange(mn)
    H = np.zeros((mn, mn), dtype=np.complex128)
    for h_i, tau_i, nu_i in zip(ch.gains, ch.delays, ch.dopplers):
        doppler = np.exp(2j * np.pi * nu_i * a * beta * g.T_s)
        H += (h_i * doppler)[:, None] * np.sinc(beta * lags - tau_i / g.T_s)
    return H


def conjugate_channel(H_t: np.ndarray, g: GridParams, domain: str) -> np.ndarray:
    """Conjugate the time-domain matrix into the DD or TF domain.

    domain='dd': (F_N kron I_M) H_t (F_N^H kron I_M)
    domain='tf': (I_N kron F_M) H_t (I_N kron F_M^H)

    Implemented as unitary FFTs on the (M, N, M, N) column-major reshape, so
    singular values are preserved exactly up to rounding.
    """
    mn = g.MN
    H_t = np.asarray(H_t, dtype=np.complex128)
    if H_t.shape != (mn, mn):
        raise ValueError(f"channel matrix must be {mn} x {mn}, got {H_t.shape}")
    H4 = H_t.reshape(g.M, g.N, g.M, g.N, order="F")
    if domain == "dd":
        out = np.fft.fft(np.fft.ifft(H4, axis=3, norm="ortho"), axis=1, norm="ortho")
    elif domain == "tf":
        out = np.fft.fft(np.fft.ifft(H4, axis=2, norm="ortho"), axis=0, norm="ortho")
    else:
        raise ValueError(f"domain must be 'dd' or 'tf', got {domain!r}")
    return out.reshape(mn, mn, order="F")


def dump_channel(H: np.ndarray, path: str) -> None:
    """Write a channel matrix for inspection.

    ``*.npy`` stores the complex matrix in binary; anything else is written
    as CSV, row-major, with each complex entry as an adjacent "re,im" pair.
    """
    H = np.asarray(H)
    if str(path).endswith(".npy"):
        np.save(path, H)
        return
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        for row in H:
            flat = np.empty(2 * len(row))
            flat[0::2] = row.real
            flat[1::2] = row.imag
            writer.writerow(f"{v:.17g}" for v in flat)
