"""Closed-form SINR, symbol-error and effective-rate analysis.

With total power P = 1 split as P1 = alpha, P2 = 1 - alpha and noise
variance sigma^2 = 1/snr:

    SINR1 = P1 / (sigma^2 + delta * P2 / MN)          (flat cross-basis floor)
    Ps1   = Q(sqrt(2 * d * SINR1))                    (first-frame symbol errors)
    SINR2 = P2 / (sigma^2 + P1 * Ps1 / MN)            (after cancelling frame 1)
    R_eff = log2(1 + SINR1) + delta * log2(1 + SINR2)

The d entering Ps1 is ambiguous in provenance: 'literal' uses the free
distance value as printed (sqrt(20) for the default code), 'squared' uses
its square. Both are exposed; the literal form is the default.
"""

import csv
import math
from dataclasses import dataclass

from scipy.special import erfc

#: Free Euclidean distance of the default TCM code (unnormalized alphabet).
DFREE_DEFAULT = math.sqrt(20.0)

CONVENTIONS = ("literal", "squared")


def qfunc(x: float) -> float:
    """Gaussian tail probability Q(x) = erfc(x / sqrt(2)) / 2."""
    return 0.5 * erfc(x / math.sqrt(2.0))


@dataclass(frozen=True)
class RatePoint:
    """One (alpha, delta) evaluation of the SINR/rate formulas."""

    alpha: float
    delta: float
    snr: float
    mn: int
    d_free: float
    sinr1: float
    sinr2: float
    ps1: float
    r1: float
    r2: float
    r_eff: float


def sinr_frames(alpha: float, delta: float, snr: float, mn: int,
                d_free: float = DFREE_DEFAULT, convention: str = "literal"):
    """(SINR1, SINR2, Ps1) for a power split alpha and sparsity delta."""
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if not 0.0 <= delta <= 1.0:
        raise ValueError(f"delta must lie in [0, 1], got {delta}")
    if snr <= 0:
        raise ValueError(f"snr must be positive, got {snr}")
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}, got {convention!r}")
    sigma2 = 1.0 / snr
    p1, p2 = alpha, 1.0 - alpha
    sinr1 = p1 / (sigma2 + delta * p2 / mn)
    d = d_free if convention == "literal" else d_free**2
    ps1 = qfunc(math.sqrt(2.0 * d * sinr1))
    sinr2 = p2 / (sigma2 + p1 * ps1 / mn)
    return sinr1, sinr2, ps1


def rate_point(alpha: float, delta: float, snr: float, mn: int,
               d_free: float = DFREE_DEFAULT, convention: str = "literal") -> RatePoint:
    sinr1, sinr2, ps1 = sinr_frames(alpha, delta, snr, mn, d_free, convention)
    r1 = math.log2(1.0 + sinr1)
    r2 = math.log2(1.0 + sinr2)
    return RatePoint(alpha=alpha, delta=delta, snr=snr, mn=mn, d_free=d_free,
                     sinr1=sinr1, sinr2=sinr2, ps1=ps1,
                     r1=r1, r2=r2, r_eff=r1 + delta * r2)


def effective_rate(point: RatePoint) -> float:
    """R_eff = R1 + delta * R2 (both frames share the grid, frame 2 delta-sparse)."""
    return point.r1 + point.delta * point.r2


def rate_surface(alphas, deltas, snr: float, mn: int,
                 d_free: float = DFREE_DEFAULT, convention: str = "literal"):
    """Dense RatePoint table over the (alpha, delta) grid, delta-major order."""
    return [rate_point(a, d, snr, mn, d_free, convention)
            for d in deltas for a in alphas]


def write_surface_csv(points, path: str) -> None:
    with open(path, "w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["alpha", "delta", "sinr1", "sinr2", "ps1", "r1", "r2", "r_eff"])
        for p in points:
            writer.writerow([f"{p.alpha:.10g}", f"{p.delta:.10g}",
                             f"{p.sinr1:.10g}", f"{p.sinr2:.10g}", f"{p.ps1:.10g}",
                             f"{p.r1:.10g}", f"{p.r2:.10g}", f"{p.r_eff:.10g}"])


@dataclass(frozen=True)
class DeltaBound:
    """Feasible second-frame sparsity for a detection margin gamma."""

    raw: float
    clamped: float


def delta_bound(alpha: float, gamma: float, sigma2: float) -> DeltaBound:
    """delta <= (alpha - gamma sigma^2) / (gamma (1 - alpha)).

    Requires gamma > 1 and alpha in (0, 1); the raw bound is clamped to
    [0, 1] for reporting.
    """
    if gamma <= 1.0:
        raise ValueError(f"gamma must exceed 1, got {gamma}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    if sigma2 < 0:
        raise ValueError(f"sigma2 must be nonnegative, got {sigma2}")
    raw = (alpha - gamma * sigma2) / (gamma * (1.0 - alpha))
    return DeltaBound(raw=raw, clamped=min(max(raw, 0.0), 1.0))
