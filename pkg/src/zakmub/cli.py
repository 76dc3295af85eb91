"""Command-line front end: simulate, rate-surface, verify, channel-dump."""

import argparse
import sys

import numpy as np

from . import harness
from .channel import PROFILES, build_time_channel, conjugate_channel, dump_channel, sample_paths
from .grid import GridParams
from .rates import CONVENTIONS, DFREE_DEFAULT, rate_surface, write_surface_csv


def _parse_floats(text: str):
    return tuple(float(v) for v in text.split(",") if v.strip())


def _parse_ints(text: str):
    return tuple(int(v) for v in text.split(",") if v.strip())


def _build_sim_config(args) -> harness.SimConfig:
    cfg = harness.load_config(args.config) if args.config else harness.SimConfig()
    overrides = {}
    if args.scheme is not None:
        overrides["scheme"] = args.scheme
    if args.snr_list is not None:
        overrides["snr_db"] = _parse_floats(args.snr_list)
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.turbo is not None:
        overrides["turbo_iters"] = _parse_ints(args.turbo)
    if args.alpha is not None:
        overrides["alpha"] = args.alpha
    if args.delta is not None:
        overrides["delta"] = args.delta
    if args.beta is not None:
        overrides["beta"] = args.beta
    if args.coding is not None:
        overrides["coding"] = args.coding
    if overrides:
        cfg = harness.SimConfig(**{**_config_dict(cfg), **overrides})
    return cfg


def _config_dict(cfg: harness.SimConfig) -> dict:
    from dataclasses import asdict

    return asdict(cfg)


def _cmd_simulate(args) -> int:
    cfg = _build_sim_config(args)
    cfg.validate()

    def progress(done, total):
        if not args.quiet and (done % 25 == 0 or done == total):
            print(f"  trials {done}/{total}", flush=True)

    rows = harness.run_sweep(cfg, out_path=args.out, json_path=args.json, progress=progress)
    for r in rows:
        print(f"{r.scheme} SNR {r.snr_db:g} dB turbo {r.turbo_iters}: "
              f"BER = {r.ber_overall:.3e} ({r.bit_errors_frame1 + r.bit_errors_frame2}"
              f"/{r.total_bits} bits)")
    print(f"results written to {args.out}")
    return 0


def _cmd_rate_surface(args) -> int:
    if args.convention not in CONVENTIONS:
        print(f"unknown convention {args.convention!r}", file=sys.stderr)
        return 2
    steps = args.grid_steps
    alphas = np.linspace(0.0, 1.0, steps + 1)[1:]  # alpha = 0 carries no frame 1
    deltas = np.linspace(0.0, 1.0, steps + 1)
    snr = 10.0 ** (args.snr_db / 10.0)
    points = rate_surface(alphas, deltas, snr, args.mn, args.dfree, args.convention)
    write_surface_csv(points, args.out)
    best = max(points, key=lambda p: p.r_eff)
    print(f"{len(points)} points written to {args.out}; "
          f"max R_eff = {best.r_eff:.3f} bits at alpha={best.alpha:.3f}, delta={best.delta:.3f}")
    return 0


def _cmd_verify(args) -> int:
    report = harness.verify_suite()
    print(report.summary())
    return 0 if report.passed else 1


def _cmd_channel_dump(args) -> int:
    if args.profile not in PROFILES:
        print(f"unknown profile {args.profile!r}; expected one of {tuple(PROFILES)}", file=sys.stderr)
        return 2
    g = GridParams(args.M, args.N, args.nu_p)
    rng = np.random.default_rng([args.seed, 0, 0])
    ch = sample_paths(PROFILES[args.profile], args.nu_max, rng)
    H = build_time_channel(ch, g, beta=args.beta)
    if args.domain == "dd":
        H = conjugate_channel(H, g, "dd")
    dump_channel(H, args.out)
    print(f"{args.domain} channel matrix ({g.MN} x {g.MN}) written to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="zakmub",
                                     description="Zak-OTFS / MUB link-level simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run a Monte Carlo BER sweep")
    p.add_argument("--config", help="YAML config file (grid/channel/sim sections)")
    p.add_argument("--scheme", choices=harness.SCHEMES)
    p.add_argument("--snr-list", help="comma-separated SNR points in dB")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--turbo", help="comma-separated turbo iteration counts to record")
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--coding", choices=harness.CODINGS)
    p.add_argument("--out", default="results.csv", help="output CSV (appended, resumable)")
    p.add_argument("--json", help="optional JSON mirror of the result rows")
    p.add_argument("--quiet", action="store_true")
    p.set_defaults(fn=_cmd_simulate)

    p = sub.add_parser("rate-surface", help="evaluate the (alpha, delta) effective-rate surface")
    p.add_argument("--snr-db", type=float, default=40.0)
    p.add_argument("--grid-steps", type=int, default=50)
    p.add_argument("--mn", type=int, default=1147)
    p.add_argument("--dfree", type=float, default=DFREE_DEFAULT)
    p.add_argument("--convention", default="literal", choices=CONVENTIONS)
    p.add_argument("--out", default="rate_surface.csv")
    p.set_defaults(fn=_cmd_rate_surface)

    p = sub.add_parser("verify", help="run the cross-module property checks")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("channel-dump", help="write one channel matrix realization to disk")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--domain", default="dd", choices=("dd", "time"))
    p.add_argument("--out", default="channel.csv", help="CSV of re,im pairs, or .npy for binary")
    p.add_argument("--profile", default="veh-a")
    p.add_argument("--nu-max", type=float, default=815.0)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("-M", type=int, default=31)
    p.add_argument("-N", type=int, default=37)
    p.add_argument("--nu-p", dest="nu_p", type=float, default=30e3)
    p.set_defaults(fn=_cmd_channel_dump)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
