"""Pilot sweeps used to calibrate the acceptance-test SNR grids."""

import sys
import time

from zakmub.harness import SimConfig, run_sweep


def main(out_dir="/tmp/pilot"):
    import os

    os.makedirs(out_dir, exist_ok=True)
    jobs = [
        SimConfig(scheme="zak-mub", snr_db=(14, 16, 18, 20, 25, 30),
                  turbo_iters=(0, 1, 2, 3), trials=200, seed=1),
        SimConfig(scheme="zak-mmse-single", snr_db=(6, 8, 10, 12, 14, 16, 18),
                  trials=200, seed=1),
        SimConfig(scheme="ofdm-ftn", delta=0.25, snr_db=(20, 30), trials=100, seed=1),
        SimConfig(scheme="otfs1-ftn", delta=0.25, snr_db=(20, 30), trials=100, seed=1),
    ]
    for cfg in jobs:
        t0 = time.perf_counter()
        rows = run_sweep(cfg, out_path=f"{out_dir}/{cfg.scheme}.csv")
        print(f"--- {cfg.scheme} ({time.perf_counter() - t0:.0f}s)")
        for r in rows:
            print(f"  snr={r.snr_db:g} turbo={r.turbo_iters} "
                  f"ber={r.ber_overall:.4e} f1={r.ber_frame1:.4e} f2={r.ber_frame2:.4e} "
                  f"e1={r.bit_errors_frame1} e2={r.bit_errors_frame2}")
        sys.stdout.flush()


if __name__ == "__main__":
    main(*sys.argv[1:])
