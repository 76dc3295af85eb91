"""Compare the compiled Viterbi kernel against the pure-Python fallback.

Run after `pip install -e . --no-build-isolation`:

    python benchmarks/bench_viterbi.py

The decoder is the hot loop of every Monte Carlo trial (a frame decode is a
2*MN-step add-compare-select recursion that cannot be vectorized across
time), so the compiled kernel sets the throughput of BER sweeps.
"""

import time

import numpy as np

from zakmub._kernels import BACKEND, viterbi_path
from zakmub._kernels._viterbi_py import viterbi_path as viterbi_path_py
from zakmub.tcm import DEFAULT_CODE, _trellis_tables, tcm_encode


def bench(fn, r, amp, tables, repeats):
    fn(r, amp, *tables)  # warm up
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(r, amp, *tables)
    return (time.perf_counter() - t0) / repeats


def main():
    tables = _trellis_tables(DEFAULT_CODE)
    rng = np.random.default_rng(0)
    mn = 1147  # frame length of the default 31 x 37 grid
    bits = rng.integers(0, 2, 2 * mn).astype(np.uint8)
    sym = tcm_encode(bits)
    r = np.empty(2 * mn)
    r[0::2], r[1::2] = sym.real, sym.imag
    r += 0.1 * rng.standard_normal(2 * mn)
    amp = 1.0 / np.sqrt(5.0)

    print(f"selected backend: {BACKEND}")
    print(f"frame: {mn} complex symbols ({2 * mn} trellis steps)")

    t_py = bench(viterbi_path_py, r, amp, tables, repeats=20)
    print(f"pure python : {t_py * 1e3:8.3f} ms/decode")
    if BACKEND == "cython":
        t_c = bench(viterbi_path, r, amp, tables, repeats=200)
        print(f"cython      : {t_c * 1e3:8.3f} ms/decode")
        print(f"speedup     : {t_py / t_c:8.1f}x")

        bits_c, m_c = viterbi_path(r, amp, *tables)
        bits_p, m_p = viterbi_path_py(r, amp, *tables)
        assert np.array_equal(bits_c, bits_p) and m_c == m_p
        print("outputs bit-identical across backends")
    else:
        print("compiled kernel not built; only the fallback is available")


if __name__ == "__main__":
    main()
