"""Construction and verification of a mutually unbiased basis pair.

Two orthonormal bases are mutually unbiased when every cross inner product
has modulus 1/sqrt(MN): a symbol mounted on one basis spreads as a flat
floor under the other. The pair used here is {identity, unitary DFT}, which
satisfies the condition exactly in every dimension: the first basis is the
plain pulsone grid and the second its Fourier dual.
"""

from dataclasses import dataclass

import numpy as np

from .transforms import unitary_dft


@dataclass(frozen=True)
class BasisPair:
    S1: np.ndarray
    S2: np.ndarray


@dataclass(frozen=True)
class MubReport:
    """Max entrywise deviations of |S_i^H S_j| from its target, per pair."""

    unitarity_1: float
    unitarity_2: float
    cross_12: float
    cross_21: float
    tol: float

    @property
    def max_deviation(self) -> float:
        return max(self.unitarity_1, self.unitarity_2, self.cross_12, self.cross_21)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tol


def build_bases(mn: int) -> BasisPair:
    """Return the canonical MUB pair (I_MN, F_MN) for dimension mn >= 2."""
    if mn < 2:
        raise ValueError(f"basis dimension must be at least 2, got {mn}")
    return BasisPair(S1=np.eye(mn, dtype=np.complex128), S2=unitary_dft(mn))


def verify_mub(pair: BasisPair, tol: float = 1e-12) -> MubReport:
    """Check unitarity of each basis and flatness of the cross Gram matrix.

    For each (i, j) the deviation is max over entries of ||S_i^H S_j| - target|
    with target I for i = j and (1/sqrt(MN)) * ones for i != j.
    """
    S1, S2 = np.asarray(pair.S1), np.asarray(pair.S2)
    mn = S1.shape[0]
    if S1.shape != (mn, mn) or S2.shape != (mn, mn):
        raise ValueError(f"bases must be square with equal dimensions, got {S1.shape} and {S2.shape}")
    eye = np.eye(mn)
    flat = 1.0 / np.sqrt(mn)

    def dev(A, target):
        return float(np.max(np.abs(np.abs(A) - target)))

    return MubReport(
        unitarity_1=dev(S1.conj().T @ S1, eye),
        unitarity_2=dev(S2.conj().T @ S2, eye),
        cross_12=dev(S1.conj().T @ S2, flat),
        cross_21=dev(S2.conj().T @ S1, flat),
        tol=tol,
    )
