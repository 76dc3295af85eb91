"""Monte Carlo experiment engine: seeded trials, SNR sweeps, CSV persistence.

Every trial is deterministic given (seed, trial_index): three child random
streams (channel, payload, noise) are derived as default_rng([seed, trial,
k]), so trials are order-independent and channel realizations match across
schemes and SNR points for the same trial index.

The per-trial link uses the exact precoded form of the channel: with
H^H = QR and x = Q x', the received frame is y = R^H x' + n, so only the
triangular factor is materialized in the hot path. The combiner output
y' = (R R^H + sigma^2 I)^{-1} R y is computed by Cholesky solve rather than
by forming W.
"""

import csv
import json
import math
import time
from dataclasses import asdict, dataclass

import numpy as np
import scipy.linalg as sla

from .channel import (PROFILES, SINGLE_PATH, ChannelRealization, PathProfile,
                      build_time_channel, conjugate_channel, sample_paths)
from .grid import GridParams
from .mub import build_bases, verify_mub
from .precoder import gram_cholesky, qr_precoder, mmse_combiner, triangular_factor
from .rates import rate_point
from .sic import (QAM4, SuperposedFrame, _nearest, _qam4_bits, frame2_support,
                  qam4_map, sic_receive, transmit)
from .tcm import compute_dfree, tcm_encode, viterbi_decode
from .transforms import dzt, idzt, itf, tf, unitary_dft

SCHEMES = ("zak-mub", "zak-mmse-single", "ofdm-ftn", "otfs1-ftn")
FTN_SCHEMES = ("ofdm-ftn", "otfs1-ftn")
CODINGS = ("tcm", "uncoded")


@dataclass(frozen=True)
class SimConfig:
    """Declarative sweep description; see load_config for the file layout."""

    M: int = 31
    N: int = 37
    nu_p: float = 30e3
    profile: str = "veh-a"
    nu_max: float = 815.0
    paths: tuple = None  # optional [(delay_s, power_db), ...] overriding profile
    scheme: str = "zak-mub"
    beta: float = None
    alpha: float = 0.9
    delta: float = 0.25
    coding: str = "tcm"
    turbo_iters: tuple = (2,)
    snr_db: tuple = (10.0,)
    trials: int = 200
    seed: int = 0

    def __post_init__(self):
        # Normalize scalars to tuples so configs hash and compare cleanly.
        object.__setattr__(self, "turbo_iters", _as_tuple_int(self.turbo_iters))
        object.__setattr__(self, "snr_db", _as_tuple_float(self.snr_db))
        if self.paths is not None:
            object.__setattr__(self, "paths",
                               tuple((float(d), float(p)) for d, p in self.paths))

    def validate(self) -> "SimConfig":
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}")
        if self.coding not in CODINGS:
            raise ValueError(f"unknown coding {self.coding!r}; expected one of {CODINGS}")
        if self.paths is None and self.profile not in PROFILES:
            raise ValueError(f"unknown channel profile {self.profile!r}; expected one of {tuple(PROFILES)}")
        self.path_profile()  # validates custom path lists
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")
        if not 0.0 <= self.delta <= 1.0:
            raise ValueError(f"delta must lie in [0, 1], got {self.delta}")
        if self.trials < 1:
            raise ValueError(f"trials must be positive, got {self.trials}")
        if len(self.snr_db) == 0:
            raise ValueError("snr_db must be nonempty")
        if any(t < 0 for t in self.turbo_iters):
            raise ValueError(f"turbo iteration counts must be nonnegative, got {self.turbo_iters}")
        if self.scheme in FTN_SCHEMES:
            beta = self.effective_beta()
            if not 0.0 < beta < 1.0:
                raise ValueError(f"FTN schemes need beta in (0, 1), got {beta}")
            if abs(1.0 / beta - (1.0 + self.delta)) > 1e-9:
                raise ValueError(
                    f"spectral-efficiency mismatch: 1/beta = {1.0 / beta:.6g} but "
                    f"1 + delta = {1.0 + self.delta:.6g} (matched comparisons need 1/beta = 1 + delta)")
        elif self.beta is not None and self.beta != 1.0:
            raise ValueError(f"beta applies only to FTN schemes, got beta={self.beta} with {self.scheme}")
        GridParams(self.M, self.N, self.nu_p)
        if self.nu_max < 0:
            raise ValueError(f"nu_max must be nonnegative, got {self.nu_max}")
        return self

    def grid(self) -> GridParams:
        return GridParams(self.M, self.N, self.nu_p)

    def path_profile(self) -> PathProfile:
        if self.paths is not None:
            pairs = [(float(d), float(p)) for d, p in self.paths]
            return PathProfile(delays=tuple(d for d, _ in pairs),
                               powers_db=tuple(p for _, p in pairs))
        return PROFILES[self.profile]

    def effective_beta(self) -> float:
        if self.scheme in FTN_SCHEMES:
            return self.beta if self.beta is not None else 1.0 / (1.0 + self.delta)
        return 1.0

    def turbo_levels(self) -> tuple:
        """Turbo settings recorded per row; single-frame schemes have none."""
        if self.scheme == "zak-mub":
            return tuple(sorted(set(self.turbo_iters)))
        return (0,)


def _as_tuple_float(v) -> tuple:
    if isinstance(v, (int, float)):
        return (float(v),)
    return tuple(float(x) for x in v)


def _as_tuple_int(v) -> tuple:
    if isinstance(v, (int, np.integer)):
        return (int(v),)
    return tuple(int(x) for x in v)


CONFIG_SECTIONS = {
    "grid": {"M": "M", "N": "N", "nu_p": "nu_p"},
    "channel": {"profile": "profile", "nu_max": "nu_max", "paths": "paths"},
    "sim": {k: k for k in ("scheme", "beta", "alpha", "delta", "coding",
                            "turbo_iters", "snr_db", "trials", "seed")},
}


def load_config(path: str) -> SimConfig:
    """Read a YAML config with grid / channel / sim sections; unknown keys error."""
    import yaml

    with open(path) as f:
        raw = yaml.safe_load(f) or {}
    if not isinstance(raw, dict):
        raise ValueError(f"config root must be a mapping, got {type(raw).__name__}")
    kwargs = {}
    for section, items in raw.items():
        if section not in CONFIG_SECTIONS:
            raise ValueError(f"unknown config section {section!r}; expected one of {tuple(CONFIG_SECTIONS)}")
        if not isinstance(items, dict):
            raise ValueError(f"config section {section!r} must be a mapping")
        allowed = CONFIG_SECTIONS[section]
        for key, value in items.items():
            if key not in allowed:
                raise ValueError(f"unknown key {key!r} in config section {section!r}; "
                                 f"expected one of {tuple(allowed)}")
            kwargs[allowed[key]] = value
    return SimConfig(**kwargs)


RESULT_FIELDS = ("scheme", "snr_db", "alpha", "delta", "beta", "turbo_iters", "trials",
                 "bit_errors_frame1", "bit_errors_frame2", "total_bits",
                 "ber_overall", "ber_frame1", "ber_frame2", "wall_seconds", "seed")


@dataclass(frozen=True)
class ResultRow:
    """One CSV record: aggregated BER outcome of all trials at one sweep point."""

    scheme: str
    snr_db: float
    alpha: float
    delta: float
    beta: float
    turbo_iters: int
    trials: int
    bit_errors_frame1: int
    bit_errors_frame2: int
    total_bits: int
    ber_overall: float
    ber_frame1: float
    ber_frame2: float
    wall_seconds: float
    seed: int

    def key(self):
        return (self.scheme, round(self.snr_db, 9), self.turbo_iters, self.seed)


@dataclass
class TrialResult:
    """Per-trial error counts keyed by turbo level, plus payload sizes."""

    errors: dict
    n_bits1: int
    n_bits2: int
    decoded: dict = None


class _TrialEngine:
    """Builds the per-trial pipeline once and reuses it across SNR points."""

    def __init__(self, config: SimConfig):
        self.config = config.validate()
        self.grid = config.grid()
        self.profile = config.path_profile()
        self.beta = config.effective_beta()
        self.domain = "tf" if config.scheme == "ofdm-ftn" else "dd"
        self.mn = self.grid.MN
        self.is_mub = config.scheme == "zak-mub"
        self.max_turbo = max(config.turbo_levels())
        if self.is_mub:
            self.bases = build_bases(self.mn)
            self.support = frame2_support(self.mn, config.delta)

    def _rng(self, trial_index: int, stream: int) -> np.random.Generator:
        return np.random.default_rng([self.config.seed, trial_index, stream])

    def _encode(self, bits: np.ndarray) -> np.ndarray:
        if self.config.coding == "tcm":
            return tcm_encode(bits)
        return qam4_map(bits)

    def _decode_single(self, yprime: np.ndarray) -> np.ndarray:
        if self.config.coding == "tcm":
            return viterbi_decode(yprime, 1.0)
        return _qam4_bits(_nearest(yprime, 1.0, QAM4))

    def run(self, trial_index: int, snr_db_list=None, keep_bits: bool = False) -> dict:
        """Run one seeded trial at each SNR; returns {snr_db: TrialResult}."""
        cfg = self.config
        snrs = cfg.snr_db if snr_db_list is None else _as_tuple_float(snr_db_list)

        ch = sample_paths(self.profile, cfg.nu_max, self._rng(trial_index, 0))
        H_t = build_time_channel(ch, self.grid, self.beta)
        H = conjugate_channel(H_t, self.grid, self.domain)
        R = triangular_factor(H)
        RH = R.conj().T

        rng_bits = self._rng(trial_index, 1)
        if self.is_mub:
            bits1 = rng_bits.integers(0, 2, size=2 * self.mn, dtype=np.uint8)
            bits2 = rng_bits.integers(0, 2, size=2 * len(self.support), dtype=np.uint8)
            x2 = np.zeros(self.mn, dtype=np.complex128)
            if len(self.support):
                x2[self.support] = self._encode(bits2)
            frame = SuperposedFrame(x1=self._encode(bits1), x2=x2,
                                    alpha=cfg.alpha, delta=cfg.delta)
            u = transmit(frame, None, self.bases)
        else:
            bits1 = rng_bits.integers(0, 2, size=2 * self.mn, dtype=np.uint8)
            bits2 = np.zeros(0, dtype=np.uint8)
            u = self._encode(bits1)

        y_clean = RH @ u
        noise_unit = self._rng(trial_index, 2)
        nvec = (noise_unit.standard_normal(self.mn) + 1j * noise_unit.standard_normal(self.mn)) / math.sqrt(2.0)

        out = {}
        for snr_db in snrs:
            sigma2 = 0.0 if math.isinf(snr_db) else 10.0 ** (-snr_db / 10.0)
            cho = gram_cholesky(R, sigma2)
            y = y_clean if sigma2 == 0.0 else y_clean + math.sqrt(sigma2) * nvec
            yprime = sla.cho_solve(cho, R @ y)

            errors = {}
            decoded = {} if keep_bits else None
            if self.is_mub:
                res = sic_receive(yprime, None, self.bases, cfg.alpha, cfg.delta,
                                  mode=cfg.coding, turbo_iters=self.max_turbo,
                                  truth=(bits1, bits2))
                for level in cfg.turbo_levels():
                    snap = res.iterations[level]
                    errors[level] = (snap.errors1, snap.errors2)
                    if keep_bits:
                        decoded[level] = (snap.bits1, snap.bits2)
            else:
                dec = self._decode_single(yprime)
                errors[0] = (int(np.count_nonzero(dec != bits1)), 0)
                if keep_bits:
                    decoded[0] = (dec, bits2)
            out[snr_db] = TrialResult(errors=errors, n_bits1=len(bits1),
                                      n_bits2=len(bits2), decoded=decoded)
        return out


def run_trial(config: SimConfig, trial_index: int, snr_db: float = None,
              keep_bits: bool = False) -> TrialResult:
    """One deterministic trial at a single SNR (config.snr_db[0] by default)."""
    engine = _TrialEngine(config)
    snr = config.snr_db[0] if snr_db is None else float(snr_db)
    return engine.run(trial_index, [snr], keep_bits=keep_bits)[snr]


def _effective_row_params(config: SimConfig):
    if config.scheme == "zak-mub":
        return config.alpha, config.delta, 1.0
    return 1.0, 0.0, config.effective_beta()


def load_rows(path: str):
    """Rows previously persisted by run_sweep; empty list if the file is absent."""
    rows = []
    try:
        with open(path, newline="") as f:
            reader = csv.DictReader(f)
            for rec in reader:
                rows.append(ResultRow(
                    scheme=rec["scheme"], snr_db=float(rec["snr_db"]),
                    alpha=float(rec["alpha"]), delta=float(rec["delta"]),
                    beta=float(rec["beta"]), turbo_iters=int(rec["turbo_iters"]),
                    trials=int(rec["trials"]),
                    bit_errors_frame1=int(rec["bit_errors_frame1"]),
                    bit_errors_frame2=int(rec["bit_errors_frame2"]),
                    total_bits=int(rec["total_bits"]),
                    ber_overall=float(rec["ber_overall"]),
                    ber_frame1=float(rec["ber_frame1"]),
                    ber_frame2=float(rec["ber_frame2"]),
                    wall_seconds=float(rec["wall_seconds"]), seed=int(rec["seed"])))
    except FileNotFoundError:
        pass
    return rows


def _append_rows(path: str, rows, write_header: bool) -> None:
    with open(path, "a", newline="") as f:
        writer = csv.writer(f)
        if write_header:
            writer.writerow(RESULT_FIELDS)
        for r in rows:
            writer.writerow([r.scheme, f"{r.snr_db:.17g}", f"{r.alpha:.17g}",
                             f"{r.delta:.17g}", f"{r.beta:.17g}", r.turbo_iters,
                             r.trials, r.bit_errors_frame1, r.bit_errors_frame2,
                             r.total_bits, f"{r.ber_overall:.17g}", f"{r.ber_frame1:.17g}",
                             f"{r.ber_frame2:.17g}", f"{r.wall_seconds:.6g}", r.seed])


def run_sweep(config: SimConfig, out_path: str = None, json_path: str = None,
              progress=None) -> list:
    """Run all (snr, turbo) points of a config; one ResultRow per point.

    Existing rows found in out_path are not recomputed (resume by key
    (scheme, snr_db, turbo_iters, seed)). Channel sampling and the QR factor
    are shared across SNR points within a trial; matched trial indices use
    matched channel/payload/noise streams.
    """
    config = config.validate()
    levels = config.turbo_levels()
    alpha, delta, beta = _effective_row_params(config)

    existing = load_rows(out_path) if out_path else []
    done = {r.key() for r in existing}
    pending = [s for s in config.snr_db
               if any((config.scheme, round(s, 9), lvl, config.seed) not in done for lvl in levels)]

    new_rows = []
    if pending:
        engine = _TrialEngine(config)
        acc = {(s, lvl): [0, 0] for s in pending for lvl in levels}
        t0 = time.perf_counter()
        n_bits1 = n_bits2 = 0
        for t in range(config.trials):
            results = engine.run(t, pending)
            for s in pending:
                tr = results[s]
                n_bits1, n_bits2 = tr.n_bits1, tr.n_bits2
                for lvl in levels:
                    e1, e2 = tr.errors[lvl]
                    acc[(s, lvl)][0] += e1
                    acc[(s, lvl)][1] += e2
            if progress is not None:
                progress(t + 1, config.trials)
        wall = (time.perf_counter() - t0) / (len(pending) * len(levels))

        for s in pending:
            for lvl in levels:
                e1, e2 = acc[(s, lvl)]
                b1, b2 = config.trials * n_bits1, config.trials * n_bits2
                total = b1 + b2
                new_rows.append(ResultRow(
                    scheme=config.scheme, snr_db=s, alpha=alpha, delta=delta, beta=beta,
                    turbo_iters=lvl, trials=config.trials,
                    bit_errors_frame1=e1, bit_errors_frame2=e2, total_bits=total,
                    ber_overall=(e1 + e2) / total,
                    ber_frame1=e1 / b1,
                    ber_frame2=e2 / b2 if b2 else 0.0,
                    wall_seconds=wall, seed=config.seed))

    if out_path and new_rows:
        _append_rows(out_path, new_rows, write_header=not existing)

    rows = existing + new_rows
    if json_path:
        with open(json_path, "w") as f:
            json.dump([asdict(r) for r in rows], f, indent=2)
    return rows


# ---------------------------------------------------------------------------
# Cross-module verification suite


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class VerifyReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def summary(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}: {c.detail}" for c in self.checks]
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines)


def _check_transforms() -> CheckResult:
    worst = 0.0
    rng = np.random.default_rng(7)
    for (m, n) in ((2, 2), (3, 4), (4, 3)):
        g = GridParams(m, n)
        eye = np.eye(g.MN, dtype=complex)
        for q in range(g.MN):
            worst = max(worst, np.max(np.abs(dzt(idzt(eye[:, q], g), g) - eye[:, q])))
            worst = max(worst, np.max(np.abs(tf(itf(eye[:, q], g), g) - eye[:, q])))
        for _ in range(20):
            v = rng.standard_normal(g.MN) + 1j * rng.standard_normal(g.MN)
            for op in (idzt, dzt, itf, tf):
                worst = max(worst, abs(np.linalg.norm(op(v, g)) - np.linalg.norm(v)))
    return CheckResult("transform round trips / unitarity", worst <= 1e-12,
                       f"max deviation {worst:.3e} (tol 1e-12)")


def _check_mub(mn: int) -> CheckResult:
    report = verify_mub(build_bases(mn), tol=1e-12)
    return CheckResult(f"MUB condition at MN={mn}", report.passed,
                       f"max deviation {report.max_deviation:.3e} (tol 1e-12)")


def well_conditioned_channel(n: int, rng: np.random.Generator,
                             s_range=(0.5, 1.5)) -> np.ndarray:
    """Random channel with singular values bounded away from zero."""
    A = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    B = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    U, _ = sla.qr(A)
    V, _ = sla.qr(B)
    s = rng.uniform(*s_range, size=n)
    return (U * s) @ V.conj().T


def _check_precoder() -> CheckResult:
    rng = np.random.default_rng(11)
    n = 64
    worst_resid = worst_unit = worst_tri = worst_link = 0.0
    for _ in range(5):
        H = well_conditioned_channel(n, rng)
        Q, R = qr_precoder(H)
        worst_resid = max(worst_resid, np.linalg.norm(Q @ R - H.conj().T) / np.linalg.norm(H))
        worst_unit = max(worst_unit, np.max(np.abs(Q.conj().T @ Q - np.eye(n))))
        worst_tri = max(worst_tri, np.max(np.abs(np.tril(R, -1))))
        W = mmse_combiner(R, 1e-6)
        worst_link = max(worst_link, np.max(np.abs(W @ H @ Q - np.eye(n))))
    ok = worst_resid <= 1e-8 and worst_unit <= 1e-10 and worst_tri <= 1e-10 and worst_link <= 1e-3
    return CheckResult("QR precoder / MMSE link reduction", ok,
                       f"resid {worst_resid:.2e}, unitarity {worst_unit:.2e}, "
                       f"tri {worst_tri:.2e}, |WHQ-I| {worst_link:.2e}")


def _check_dfree() -> CheckResult:
    d2 = compute_dfree() ** 2
    d2n = compute_dfree(normalized=True) ** 2
    ok = abs(d2 - 20.0) < 1e-9 and abs(d2n - 4.0) < 1e-9
    return CheckResult("TCM free distance", ok,
                       f"d_free^2 = {d2:.6f} unnormalized, {d2n:.6f} normalized")


def _check_rate_surface() -> CheckResult:
    snr, mn = 1e4, 1147
    problems = []
    deltas = [round(0.1 * k, 2) for k in range(1, 10)]
    # the surface must drop at alpha = 1 (single-frame transmission)
    for d in deltas:
        r99 = rate_point(0.99, d, snr, mn).r_eff
        r100 = rate_point(1.0, d, snr, mn).r_eff
        if not r100 < r99:
            problems.append(f"no dip at alpha=1 for delta={d}")
    # nondecreasing in delta for fixed alpha
    for a in (0.5, 0.6, 0.7, 0.8, 0.9, 0.95):
        vals = [rate_point(a, d, snr, mn).r_eff for d in deltas]
        if any(v2 < v1 - 1e-12 for v1, v2 in zip(vals, vals[1:])):
            problems.append(f"not nondecreasing in delta at alpha={a}")
    # optimum power split close to, but below, full allocation
    alphas = np.linspace(0.5, 1.0, 501)
    vals = [rate_point(a, 0.25, snr, mn).r_eff for a in alphas]
    astar = float(alphas[int(np.argmax(vals))])
    if not 0.9 < astar < 1.0:
        problems.append(f"argmax alpha {astar:.4f} outside (0.9, 1.0)")
    return CheckResult("rate surface shape", not problems,
                       "; ".join(problems) if problems else f"argmax alpha = {astar:.4f} at delta=0.25")


def _check_channel() -> CheckResult:
    g = GridParams(8, 4)
    rng = np.random.default_rng(3)

    ident = build_time_channel(
        sample_paths(SINGLE_PATH, 0.0, rng), g, beta=1.0)
    dev_ident = np.max(np.abs(np.abs(ident) - np.eye(g.MN)))

    # integer delays, no Doppler -> circulant; unitary DFT diagonalizes it
    ch = ChannelRealization(gains=np.array([0.8, 0.6j]),
                            delays=np.array([0.0, 2 * g.T_s]),
                            dopplers=np.zeros(2))
    C = build_time_channel(ch, g, beta=1.0)
    F = unitary_dft(g.MN)
    D = F @ C @ F.conj().T
    dev_circ = np.max(np.abs(D - np.diag(np.diagonal(D))))
    dev_eig = np.max(np.abs(np.diagonal(D) - np.fft.fft(C[:, 0])))

    ch2 = sample_paths(PROFILES["veh-a"], 815.0, rng)
    H_t = build_time_channel(ch2, g, beta=1.0)
    H_dd = conjugate_channel(H_t, g, "dd")
    U = np.kron(unitary_dft(g.N), np.eye(g.M))  # dense oracle for the inverse
    dev_round = np.max(np.abs(U.conj().T @ H_dd @ U - H_t))
    ok = dev_ident <= 1e-12 and dev_circ <= 1e-10 and dev_eig <= 1e-10 and dev_round <= 1e-10
    return CheckResult("channel matrix structure", ok,
                       f"identity {dev_ident:.2e}, circulant {dev_circ:.2e}, "
                       f"eigens {dev_eig:.2e}, conjugation round trip {dev_round:.2e}")


def verify_suite(mn: int = 1147) -> VerifyReport:
    """Cross-module property checks; all must pass on a fresh build."""
    return VerifyReport(checks=(
        _check_transforms(),
        _check_mub(mn),
        _check_precoder(),
        _check_dfree(),
        _check_rate_surface(),
        _check_channel(),
    ))
