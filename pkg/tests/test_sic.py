import numpy as np
import pytest
from numpy.testing import assert_allclose

from zakmub.mub import build_bases
from zakmub.sic import (QAM4, SuperposedFrame, cancel, detect_uncoded, frame2_support,
                        frame_amplitudes, matched_filter, qam4_map, sic_receive, transmit)
from zakmub.tcm import tcm_encode


def dft(n):
    k = np.arange(n)
    return np.exp(-2j * np.pi * np.outer(k, k) / n) / np.sqrt(n)


def make_frame(mn, delta, alpha, rng, coded=False):
    support = frame2_support(mn, delta)
    if coded:
        bits1 = rng.integers(0, 2, 2 * mn)
        bits2 = rng.integers(0, 2, 2 * len(support))
        x1 = tcm_encode(bits1)
        x2 = np.zeros(mn, complex)
        x2[support] = tcm_encode(bits2) if len(support) else 0
        return SuperposedFrame(x1, x2, alpha, delta), bits1, bits2
    bits1 = rng.integers(0, 2, 2 * mn)
    bits2 = rng.integers(0, 2, 2 * len(support))
    x1 = qam4_map(bits1)
    x2 = np.zeros(mn, complex)
    if len(support):
        x2[support] = qam4_map(bits2)
    return SuperposedFrame(x1, x2, alpha, delta), bits1, bits2


class TestSupportAndAmplitudes:
    def test_support_is_ceil(self):
        assert len(frame2_support(1147, 0.25)) == 287
        assert len(frame2_support(1147, 0.5)) == 574
        assert len(frame2_support(10, 0.0)) == 0
        assert_allclose(frame2_support(8, 0.5), np.arange(4))

    def test_support_bounds(self):
        with pytest.raises(ValueError):
            frame2_support(8, -0.1)
        with pytest.raises(ValueError):
            frame2_support(8, 1.5)

    def test_amplitudes(self):
        b1, b2 = frame_amplitudes(0.9, 287)
        assert b1 == pytest.approx(np.sqrt(0.9))
        assert b2 == pytest.approx(np.sqrt(0.1))
        # empty second frame: all energy to frame 1
        assert frame_amplitudes(0.9, 0) == (1.0, 0.0)
        with pytest.raises(ValueError):
            frame_amplitudes(0.0, 4)
        with pytest.raises(ValueError):
            frame_amplitudes(1.2, 4)


class TestTransmit:
    def test_alpha_one_identity_bases(self):
        rng = np.random.default_rng(0)
        frame, _, _ = make_frame(8, 0.5, 1.0, rng)
        x = transmit(frame, None, build_bases(8))
        # frame 2 rides at zero amplitude when alpha = 1
        assert_allclose(x, frame.x1, atol=1e-15)

    def test_hand_oracle_mn4(self):
        # all-ones frames, alpha = 0.5, S2 = F_4: explicit 4x4 arithmetic
        frame = SuperposedFrame(np.ones(4, complex), np.ones(4, complex), 0.5, 1.0)
        bases = build_bases(4)
        x = transmit(frame, None, bases)
        expected = np.sqrt(0.5) * np.ones(4) + np.sqrt(0.5) * (dft(4) @ np.ones(4))
        assert_allclose(x, expected, atol=1e-13)

    def test_precoder_applied(self):
        rng = np.random.default_rng(1)
        frame, _, _ = make_frame(6, 0.5, 0.8, rng)
        bases = build_bases(6)
        Q = dft(6)  # any unitary will do
        assert_allclose(transmit(frame, Q, bases), Q @ transmit(frame, None, bases), atol=1e-13)

    def test_expected_energy_split(self):
        # E||x||^2 = alpha*MN + (1-alpha)*ceil(delta*MN) over random draws
        mn, delta, alpha = 64, 0.25, 0.9
        rng = np.random.default_rng(2)
        bases = build_bases(mn)
        acc = 0.0
        n_draws = 1000
        for _ in range(n_draws):
            frame, _, _ = make_frame(mn, delta, alpha, rng)
            acc += np.linalg.norm(transmit(frame, None, bases)) ** 2
        expected = alpha * mn + (1 - alpha) * len(frame2_support(mn, delta))
        assert acc / n_draws == pytest.approx(expected, rel=0.02)

    def test_alpha_validation(self):
        with pytest.raises(ValueError):
            SuperposedFrame(np.ones(4, complex), np.zeros(4, complex), 0.0, 0.5)


class TestMatchedFilterCancel:
    def test_exact_projection(self):
        rng = np.random.default_rng(3)
        bases = build_bases(8)
        x = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        assert_allclose(matched_filter(bases.S1 @ x, bases.S1), x, atol=1e-13)
        assert_allclose(matched_filter(bases.S2 @ x, bases.S2), x, atol=1e-13)

    def test_norm_preserved(self):
        rng = np.random.default_rng(4)
        bases = build_bases(16)
        y = rng.standard_normal(16) + 1j * rng.standard_normal(16)
        assert np.linalg.norm(matched_filter(y, bases.S2)) == pytest.approx(np.linalg.norm(y))

    def test_two_frame_decomposition_mn4(self):
        rng = np.random.default_rng(5)
        bases = build_bases(4)
        x1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        x2 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        a = 0.7
        y = np.sqrt(a) * bases.S1 @ x1 + np.sqrt(1 - a) * bases.S2 @ x2
        got = matched_filter(y, bases.S1)
        # S1 is the identity, so S1^H S2 x2 is just the DFT image of x2
        expected = np.sqrt(a) * x1 + np.sqrt(1 - a) * (dft(4) @ x2)
        assert_allclose(got, expected, atol=1e-13)

    def test_cancel(self):
        rng = np.random.default_rng(6)
        bases = build_bases(4)
        x1 = qam4_map(rng.integers(0, 2, 8))
        x2 = qam4_map(rng.integers(0, 2, 8))
        b1, b2 = np.sqrt(0.6), np.sqrt(0.4)
        y = b1 * bases.S1 @ x1 + b2 * bases.S2 @ x2
        resid = cancel(y, b1, bases.S1, x1)
        assert_allclose(resid, b2 * bases.S2 @ x2, atol=1e-13)
        assert_allclose(cancel(y, b1, bases.S1, np.zeros(4)), y, atol=0)

    def test_cancel_numeric_oracle(self):
        y = np.array([1 + 1j, 2, -1j, 0.5])
        xhat = np.array([1, 0, 0, 1j])
        S = dft(4)
        expected = y - 0.5 * (S @ xhat)  # explicit arithmetic
        assert_allclose(cancel(y, 0.5, S, xhat), expected, atol=1e-14)


class TestDetectUncoded:
    def test_exact_symbols(self):
        rng = np.random.default_rng(7)
        sym = qam4_map(rng.integers(0, 2, 32))
        assert_allclose(detect_uncoded(0.3 * sym, 0.3), sym, atol=0)

    def test_nearest_point(self):
        z = np.array([0.4 * (0.9 + 1.1j) / np.sqrt(2)])
        assert_allclose(detect_uncoded(z, 0.4), [(1 + 1j) / np.sqrt(2)])

    def test_tie_breaks_to_lowest_index(self):
        # real part exactly on the boundary: +1 side (lower index) wins
        z = np.array([0.0 + 0.5j, 0.0 - 0.5j, 0.0 + 0.0j])
        got = detect_uncoded(z, 1.0)
        assert_allclose(got, [QAM4[0], QAM4[1], QAM4[0]])

    def test_amplitude_validation(self):
        with pytest.raises(ValueError):
            detect_uncoded(np.zeros(2, complex), 0.0)


class TestSicReceive:
    def test_identity_channel_noiseless_uncoded(self):
        # full-size grid: interference margin 0.1/sqrt(MN) per entry is tiny
        mn = 1147
        rng = np.random.default_rng(8)
        bases = build_bases(mn)
        frame, bits1, bits2 = make_frame(mn, 0.25, 0.9, rng)
        y = transmit(frame, None, bases)
        res = sic_receive(y, None, bases, 0.9, 0.25, mode="uncoded", turbo_iters=0,
                          truth=(bits1, bits2))
        assert res.iterations[0].errors1 == 0
        assert res.iterations[0].errors2 == 0

    def test_alpha_one_degenerate(self):
        mn = 64
        rng = np.random.default_rng(9)
        bases = build_bases(mn)
        frame, bits1, _ = make_frame(mn, 0.25, 1.0, rng)
        y = transmit(frame, None, bases)
        res = sic_receive(y, None, bases, 1.0, 0.25, mode="uncoded", turbo_iters=1)
        assert res.bits2.size == 0
        assert np.array_equal(res.bits1, bits1)

    def test_exhaustive_bruteforce_mn4(self):
        # frame-1 decisions equal the argmin over all 256 4-QAM vectors
        mn, alpha, delta = 4, 0.8, 1.0
        bases = build_bases(mn)
        b1, b2 = frame_amplitudes(alpha, mn)
        rng = np.random.default_rng(10)
        grid = [np.array([QAM4[(n >> (2 * q)) & 3] for q in range(mn)])
                for n in range(4 ** mn)]
        for _ in range(50):
            frame, bits1, bits2 = make_frame(mn, delta, alpha, rng)
            y = transmit(frame, None, bases)
            y = y + 0.3 * (rng.standard_normal(mn) + 1j * rng.standard_normal(mn))
            res = sic_receive(y, None, bases, alpha, delta, mode="uncoded", turbo_iters=0)
            x1hat = res.iterations[0].symbols1
            best = min(grid, key=lambda v: np.linalg.norm(y - b1 * bases.S1 @ v) ** 2)
            assert_allclose(x1hat, best, atol=0)
            # frame 2: same exhaustive metric on the cancelled residual
            resid = cancel(y, b1, bases.S1, x1hat)
            best2 = min(grid, key=lambda v: np.linalg.norm(resid - b2 * bases.S2 @ v) ** 2)
            x2hat = np.zeros(mn, complex)
            x2hat[frame.support] = res.iterations[0].symbols2
            assert_allclose(x2hat, best2, atol=0)

    def test_combiner_argument(self):
        mn = 16
        rng = np.random.default_rng(11)
        bases = build_bases(mn)
        frame, bits1, bits2 = make_frame(mn, 0.5, 0.9, rng)
        y = transmit(frame, None, bases)
        res_w = sic_receive(y, np.eye(mn), bases, 0.9, 0.5, mode="uncoded", turbo_iters=0)
        res_n = sic_receive(y, None, bases, 0.9, 0.5, mode="uncoded", turbo_iters=0)
        assert np.array_equal(res_w.bits1, res_n.bits1)
        assert np.array_equal(res_w.bits2, res_n.bits2)

    def test_tcm_mode_noiseless(self):
        mn = 128
        rng = np.random.default_rng(12)
        bases = build_bases(mn)
        frame, bits1, bits2 = make_frame(mn, 0.25, 0.9, rng, coded=True)
        y = transmit(frame, None, bases)
        res = sic_receive(y, None, bases, 0.9, 0.25, mode="tcm", turbo_iters=2,
                          truth=(bits1, bits2))
        assert len(res.iterations) == 3
        for snap in res.iterations:
            assert snap.errors1 == 0 and snap.errors2 == 0

    def test_turbo_snapshots_structure(self):
        mn = 32
        rng = np.random.default_rng(13)
        bases = build_bases(mn)
        frame, bits1, bits2 = make_frame(mn, 0.5, 0.7, rng)
        y = transmit(frame, None, bases)
        y += 0.2 * (rng.standard_normal(mn) + 1j * rng.standard_normal(mn))
        res = sic_receive(y, None, bases, 0.7, 0.5, mode="uncoded", turbo_iters=3,
                          truth=(bits1, bits2))
        assert len(res.iterations) == 4
        assert np.array_equal(res.bits1, res.iterations[-1].bits1)
        assert all(s.errors1 is not None for s in res.iterations)

    def test_validation(self):
        bases = build_bases(4)
        with pytest.raises(ValueError):
            sic_receive(np.zeros(4, complex), None, bases, 0.9, 0.5, mode="bogus")
        with pytest.raises(ValueError):
            sic_receive(np.zeros(4, complex), None, bases, 0.9, 0.5, turbo_iters=-1)
