"""Unitary transforms between delay-Doppler, time-frequency and time domains.

All DFTs are unitary (1/sqrt(dim) scaling), so every transform here is
energy preserving and its inverse is its conjugate transpose:

- idzt / dzt:  (F_N^H kron I_M) and (F_N kron I_M), acting on the Doppler axis
- itf  / tf:   (I_N kron F_M^H) and (I_N kron F_M), acting on the frequency axis

The Kronecker products are applied as FFTs on the column-major (M, N)
reshape of the frame, never as dense matrices.
"""

import numpy as np

from .grid import GridParams, as_frame


def _to_array(x: np.ndarray, g: GridParams) -> np.ndarray:
    return as_frame(x, g).reshape(g.M, g.N, order="F")


def _to_frame(X: np.ndarray) -> np.ndarray:
    return X.reshape(-1, order="F")


def idzt(x: np.ndarray, g: GridParams) -> np.ndarray:
    """DD frame -> time samples, s = (F_N^H kron I_M) x."""
    return _to_frame(np.fft.ifft(_to_array(x, g), axis=1, norm="ortho"))


def dzt(s: np.ndarray, g: GridParams) -> np.ndarray:
    """Time samples -> DD frame, x = (F_N kron I_M) s. Exact inverse of idzt."""
    return _to_frame(np.fft.fft(_to_array(s, g), axis=1, norm="ortho"))


def itf(x: np.ndarray, g: GridParams) -> np.ndarray:
    """TF frame -> time samples, s = (I_N kron F_M^H) x."""
    return _to_frame(np.fft.ifft(_to_array(x, g), axis=0, norm="ortho"))


def tf(s: np.ndarray, g: GridParams) -> np.ndarray:
    """Time samples -> TF frame, x = (I_N kron F_M) s. Exact inverse of itf."""
    return _to_frame(np.fft.fft(_to_array(s, g), axis=0, norm="ortho"))


def unitary_dft(n: int) -> np.ndarray:
    """Dense unitary n-point DFT matrix F[k, l] = exp(-2j pi k l / n) / sqrt(n).

    Phase arguments are reduced mod n before exponentiation so entry
    magnitudes stay exact to machine precision even for large n.
    """
    if n < 1:
        raise ValueError(f"DFT size must be positive, got {n}")
    kl = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * kl / n) / np.sqrt(n)
