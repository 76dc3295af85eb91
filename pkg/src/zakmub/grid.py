"""Delay-Doppler grid geometry and frame conventions.

A frame is a length-MN complex vector. Vectorization is column-major:

- DD domain:  entry q = k + M*l  <->  delay bin k in [0, M), Doppler bin l in [0, N)
- TF domain:  entry q = m + M*n  <->  frequency bin m, time bin n
- time domain: entry a is the baseband sample at t = a * beta * T_s

Frames are plain complex ndarrays; :func:`as_frame` enforces the length and
finiteness invariants where a module consumes one.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GridParams:
    """Grid dimensions and the derived bandwidth/time quantities.

    The Doppler period nu_p fixes the delay period tau_p = 1/nu_p. Frame
    bandwidth is B = M*nu_p, frame duration T = N*tau_p, sample spacing
    T_s = 1/B, so the time-bandwidth product B*T equals the symbol count MN.
    """

    M: int
    N: int
    nu_p: float = 30e3

    def __post_init__(self):
        if self.M < 1 or self.N < 1:
            raise ValueError(f"grid dimensions must be positive, got M={self.M}, N={self.N}")
        if self.nu_p <= 0:
            raise ValueError(f"Doppler period nu_p must be positive, got {self.nu_p}")

    @property
    def tau_p(self) -> float:
        return 1.0 / self.nu_p

    @property
    def B(self) -> float:
        return self.M * self.nu_p

    @property
    def T(self) -> float:
        return self.N * self.tau_p

    @property
    def T_s(self) -> float:
        return 1.0 / self.B

    @property
    def MN(self) -> int:
        return self.M * self.N


def as_frame(x, g: GridParams) -> np.ndarray:
    """Validate and return ``x`` as a length-MN complex frame."""
    x = np.asarray(x, dtype=np.complex128)
    if x.shape != (g.MN,):
        raise ValueError(f"frame must have shape ({g.MN},), got {x.shape}")
    if not np.all(np.isfinite(x)):
        raise ValueError("frame contains non-finite entries")
    return x
