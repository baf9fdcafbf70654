"""Weighted-interpolation estimator: DFT projections, anchor noise
terms, the 2x2 MMSE weight solution (checked against hand inversions, a
quadrature oracle, and an empirical least-squares oracle), and the full
pipeline.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import ON_GRID_PROFILE, static_profile
from wice.channel import (PROFILES, apply_channel, noise_variance,
                          sample_channel, sample_tap_processes)
from wice.estimators import (DftMatrices, WiWeightTable, als_pilot,
                             default_dft_matrices, estimate_frame,
                             group_pilots, instrumented_ops, lp_pilot,
                             noise_term, sls_pilot, wi_estimate, wi_weights)
from wice.frames import (FrameSpec, K_ON, LTS_SEQUENCE, SYMBOL_DURATION,
                         build_frame)
from wice.metrics import ComplexityParams, complexity, nmse


@pytest.fixture(scope="module")
def dft():
    return default_dft_matrices()


class TestDftMatrices:
    def test_pseudo_inverse_identity(self, dft):
        eye = dft.f_on_pinv @ dft.f_on
        assert np.max(np.abs(eye - np.eye(dft.n_taps))) < 1e-10

    def test_projection_idempotent(self, dft):
        assert np.max(np.abs(dft.w_als @ dft.w_als - dft.w_als)) < 1e-8

    def test_projection_rank(self, dft):
        assert np.linalg.matrix_rank(dft.w_als, tol=1e-8) == dft.n_taps

    def test_lp_rows_reproduced_for_l_tap_channel(self, dft, rng):
        taps = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        h = dft.f_on @ taps
        h_est = dft.w_dft @ h[dft.lp_idx]
        assert np.allclose(h_est[dft.lp_idx], h[dft.lp_idx], atol=1e-10)
        assert np.allclose(h_est, h, atol=1e-10)


class TestAnchorEstimators:
    def test_sls_noiseless(self, rng):
        h = rng.standard_normal(K_ON) + 1j * rng.standard_normal(K_ON)
        assert np.allclose(sls_pilot(h * LTS_SEQUENCE), h)

    def test_sls_unit_pilots_pass_through(self, rng):
        y = rng.standard_normal(K_ON) + 1j * rng.standard_normal(K_ON)
        assert np.array_equal(sls_pilot(y, pilot_seq=np.ones(K_ON)), y)

    def test_sls_noise_power(self, rng):
        sigma2, trials = 0.1, 4000
        noise = (rng.standard_normal((trials, K_ON))
                 + 1j * rng.standard_normal((trials, K_ON))) * np.sqrt(sigma2 / 2)
        errs = [sls_pilot(LTS_SEQUENCE + noise[t]) - 1.0 for t in range(trials)]
        assert np.mean(np.abs(errs) ** 2) == pytest.approx(sigma2, rel=0.05)

    def test_als_projection_identity_on_l_tap_channel(self, dft, rng):
        taps = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        h = dft.f_on @ taps
        assert np.allclose(als_pilot(h, dft), h, atol=1e-10)

    def test_als_idempotent(self, dft, rng):
        x = rng.standard_normal(K_ON) + 1j * rng.standard_normal(K_ON)
        once = als_pilot(x, dft)
        assert np.max(np.abs(als_pilot(once, dft) - once)) < 1e-8

    def test_als_white_noise_energy_ratio(self, dft, rng):
        # projection keeps tr(W W^H)/K_on = L/K_on of white-noise energy
        trials = 6000
        v = (rng.standard_normal((trials, K_ON))
             + 1j * rng.standard_normal((trials, K_ON))) / np.sqrt(2)
        out = v @ dft.w_als.T
        ratio = np.mean(np.abs(out) ** 2) / np.mean(np.abs(v) ** 2)
        trace = np.sum(np.abs(dft.w_als) ** 2) / K_ON
        assert trace == pytest.approx(12 / 52, rel=1e-10)
        assert ratio == pytest.approx(trace, rel=0.05)

    def test_lp_noiseless_recovery(self, dft, rng):
        taps = rng.standard_normal(12) + 1j * rng.standard_normal(12)
        h = dft.f_on @ taps
        rx_cells = h[dft.lp_idx] * LTS_SEQUENCE[dft.lp_idx]
        assert np.allclose(lp_pilot(rx_cells, dft), h, atol=1e-10)

    def test_lp_noise_amplification_matches_trace(self, dft, rng):
        trials = 6000
        v = (rng.standard_normal((trials, 12))
             + 1j * rng.standard_normal((trials, 12))) / np.sqrt(2)
        out = (dft.w_dft @ v.T).T
        gain = np.mean(np.sum(np.abs(out) ** 2, axis=1)) / K_ON
        trace = np.sum(np.abs(dft.w_dft) ** 2) / K_ON
        assert gain == pytest.approx(trace, rel=0.05)

    def test_lp_wrong_cell_count_rejected(self, dft):
        with pytest.raises(ValueError):
            lp_pilot(np.ones(5), dft)


class TestGrouping:
    def test_single_pilot_symbol(self, rng):
        h0, h1 = rng.standard_normal((2, K_ON)) + 0j
        pairs = group_pilots([h0, h1])
        assert len(pairs) == 1
        assert np.array_equal(pairs[0], np.column_stack([h0, h1]))

    def test_three_pilot_symbols_reuse_anchors(self, rng):
        anchors = list(rng.standard_normal((4, K_ON)) + 0j)
        pairs = group_pilots(anchors)
        assert len(pairs) == 3
        for q in range(3):
            assert np.array_equal(pairs[q][:, 0], anchors[q])
            assert np.array_equal(pairs[q][:, 1], anchors[q + 1])

    def test_empty_rejected(self, rng):
        with pytest.raises(ValueError):
            group_pilots([rng.standard_normal(K_ON) + 0j])


def jakes_corr_quadrature(fd: float, tau: float) -> float:
    """Time correlation from the Doppler spectrum by numerical
    quadrature (independent of the Bessel closed form)."""
    if fd == 0.0:
        return 1.0
    val, _ = quad(lambda th: np.cos(2 * np.pi * fd * tau * np.sin(th)) / np.pi,
                  -np.pi / 2, np.pi / 2)
    return val


class TestWiWeights:
    def test_static_equal_noise_hand_inversion(self):
        # f_d = 0, E_q = E_{q+1} = E: every column is [1/(E+2), 1/(E+2)]
        for e in (0.5, 0.1, 2.0):
            w = wi_weights(0.0, SYMBOL_DURATION, 8, e, e)
            assert np.max(np.abs(w - 1.0 / (e + 2.0))) < 1e-10

    def test_colocated_noiseless_anchor_takes_all_weight(self):
        w = wi_weights(500.0, SYMBOL_DURATION, 50, 0.0, 0.0)
        assert abs(w[0, 0] - 1.0) < 1e-10
        assert abs(w[1, 0]) < 1e-10

    def test_matches_generic_linear_solver(self, rng):
        # column-by-column reference with numpy.linalg.lstsq on the same
        # 2x2 system assembled from quadrature correlations
        fd, n_data, e1, e2 = 500.0, 50, 0.1, 0.25
        got = wi_weights(fd, SYMBOL_DURATION, n_data, e1, e2)
        rho = jakes_corr_quadrature(fd, n_data * SYMBOL_DURATION)
        gram = np.array([[1 + e1, rho], [rho, 1 + e2]])
        for f in range(1, n_data + 1):
            rhs = np.array([jakes_corr_quadrature(fd, (f - 1) * SYMBOL_DURATION),
                            jakes_corr_quadrature(fd, (n_data + 1 - f) * SYMBOL_DURATION)])
            ref, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
            assert np.max(np.abs(got[:, f - 1] - ref)) < 1e-8

    def test_empirical_mmse_oracle(self):
        # least-squares fit on synthetic fading: E|h_f - c^T a|^2
        # minimized over many realizations reproduces the closed form
        fd, n_data, e = 500.0, 50, 0.1
        want = wi_weights(fd, SYMBOL_DURATION, n_data, e, e)
        rng = np.random.default_rng(17)
        gram = np.zeros((2, 2), dtype=complex)
        rhs = np.zeros((2, n_data), dtype=complex)
        chunk, n_chunks = 100_000, 12
        for _ in range(n_chunks):
            x = sample_tap_processes(fd, chunk, n_data + 1, rng)
            na = (rng.standard_normal(chunk) + 1j * rng.standard_normal(chunk)) \
                * np.sqrt(e / 2)
            nb = (rng.standard_normal(chunk) + 1j * rng.standard_normal(chunk)) \
                * np.sqrt(e / 2)
            a = np.column_stack([x[:, 0] + na, x[:, n_data] + nb])
            gram += a.conj().T @ a
            rhs += a.conj().T @ x[:, :n_data]
        got = np.real(np.linalg.solve(gram, rhs))
        assert np.max(np.abs(got - want)) < 5e-3

    def test_monotone_weight_handoff(self):
        # while the anchor-gap Bessel argument stays below the first J0
        # zero, weight flows monotonically from the lead anchor to the
        # trailing one
        fd, n_data = 500.0, 40
        assert 2 * np.pi * fd * n_data * SYMBOL_DURATION < 2.405
        w = wi_weights(fd, SYMBOL_DURATION, n_data, 0.05, 0.05)
        assert np.all(np.diff(w[0]) <= 1e-12)
        assert np.all(np.diff(w[1]) >= -1e-12)

    def test_singular_system_regularized(self):
        w = wi_weights(0.0, SYMBOL_DURATION, 5, 0.0, 0.0)
        assert np.all(np.isfinite(w))
        assert np.allclose(w.sum(axis=0), 1.0, atol=1e-6)

    def test_rejects_negative_noise(self):
        with pytest.raises(ValueError):
            wi_weights(100.0, SYMBOL_DURATION, 5, -0.1, 0.0)


class TestWiEstimate:
    def test_unit_column_selects_anchor(self, rng):
        pair = rng.standard_normal((K_ON, 2)) + 1j * rng.standard_normal((K_ON, 2))
        w = np.array([[1.0, 0.0], [0.0, 1.0]])
        out = wi_estimate(pair, w)
        assert np.allclose(out[:, 0], pair[:, 0])
        assert np.allclose(out[:, 1], pair[:, 1])

    def test_identical_anchors_scale_by_column_sum(self, rng):
        h = rng.standard_normal(K_ON) + 1j * rng.standard_normal(K_ON)
        pair = np.column_stack([h, h])
        w = np.array([[0.3, 0.9], [0.5, 0.4]])
        out = wi_estimate(pair, w)
        assert np.allclose(out[:, 0], 0.8 * h)
        assert np.allclose(out[:, 1], 1.3 * h)

    def test_dim_mismatch(self, rng):
        with pytest.raises(ValueError):
            wi_estimate(rng.standard_normal((K_ON, 3)), np.ones((2, 4)))


class TestNoiseTerm:
    def test_sls_equals_sigma2(self, dft):
        assert noise_term("fp-sls", 0.2, dft).value == pytest.approx(0.2)

    def test_zero_noise(self, dft):
        for scheme in ("fp-sls", "fp-als", "lp", "preamble"):
            assert noise_term(scheme, 0.0, dft).value == 0.0

    def test_preamble_average(self, dft):
        assert noise_term("preamble", 0.2, dft).value == pytest.approx(0.1)

    def test_als_trace_against_dense_oracle(self, dft):
        w = dft.f_on @ np.linalg.pinv(dft.f_on)
        ref = np.trace(w @ w.conj().T).real / K_ON
        got = noise_term("fp-als", 1.0, dft).value
        assert abs(got - ref) < 1e-10 * ref

    def test_lp_trace_against_dense_oracle(self, dft):
        w = dft.f_on @ np.linalg.pinv(dft.f_p)
        ref = np.trace(w @ w.conj().T).real / K_ON
        assert noise_term("lp", 1.0, dft).value == pytest.approx(ref, rel=1e-10)


class TestWeightTable:
    def test_offline_equals_online_bit_for_bit(self):
        table = WiWeightTable()
        key = (500.0, SYMBOL_DURATION, 49, 0.05, 0.1)
        stored = table.add(*key)
        fresh = wi_weights(*key)
        assert np.array_equal(stored, fresh)
        assert table.lookup(*key) is stored

    def test_save_load_roundtrip_bit_exact(self, tmp_path):
        table = WiWeightTable()
        for fd in (0.0, 250.0, 1000.0):
            for n in (32, 49, 99):
                table.add(fd, SYMBOL_DURATION, n, 0.1, 0.2)
        path = tmp_path / "weights.wiwt"
        table.save(path)
        loaded = WiWeightTable.load(path)
        assert len(loaded) == len(table)
        for key, mat in table.items():
            assert np.array_equal(loaded.get(*key), mat)


class TestPipeline:
    def test_noiseless_static_channel_recovered_by_all_schemes(self):
        # f_d = 0 on-grid channel, zero noise: anchors are exact and the
        # regularized weights sum to one, so the output is the channel
        prof = static_profile(ON_GRID_PROFILE)
        for scheme, structure in (("fp-sls", "FP"), ("fp-als", "FP"), ("lp", "LP")):
            spec = FrameSpec(n_symbols=50, n_pilot_syms=2, scheme=structure)
            chan = sample_channel(prof, spec, 5)
            rx = apply_channel(build_frame(spec, rng=5), chan, None)
            est = estimate_frame(rx, 0.0, 0.0, scheme=scheme)
            err = np.max(np.abs(est.h_hat - chan.freq_response[:, 1:]))
            assert err < 1e-6, (scheme, err)

    def test_als_beats_sls_at_low_snr(self):
        prof = PROFILES["VTV-SDWW-500"]
        spec = FrameSpec(n_symbols=100, n_pilot_syms=2)
        snr = 5.0
        sls_n, als_n = [], []
        for k in range(150):
            chan = sample_channel(prof, spec, np.random.default_rng((k, 2)))
            rx = apply_channel(build_frame(spec, rng=np.random.default_rng((k, 3))),
                               chan, snr)
            h_true = chan.freq_response[:, 1:]
            sigma2 = noise_variance(snr)
            sls_n.append(nmse(estimate_frame(rx, 500.0, sigma2, "fp-sls").h_hat, h_true))
            als_n.append(nmse(estimate_frame(rx, 500.0, sigma2, "fp-als").h_hat, h_true))
        assert np.mean(als_n) < np.mean(sls_n)

    def test_scheme_structure_mismatch_rejected(self):
        spec = FrameSpec(n_symbols=20, n_pilot_syms=1, scheme="LP")
        rx = build_frame(spec, rng=0)
        with pytest.raises(ValueError):
            estimate_frame(rx, 100.0, 0.1, scheme="fp-als")

    def test_instrumented_ops_close_to_published_formulas(self):
        # shape-derived tallies of the executed pipeline vs the
        # closed-form interpolation counts, within 2%
        for scheme, structure in (("fp-sls", "FP"), ("fp-als", "FP"), ("lp", "LP")):
            spec = FrameSpec(n_symbols=100, n_pilot_syms=2, scheme=structure)
            got = instrumented_ops(spec, scheme)
            want = complexity(scheme, ComplexityParams(n_pilot_syms=2))
            assert abs(got.mul_div - want.mul_div) <= 0.02 * want.mul_div, scheme
            assert abs(got.sum_sub - want.sum_sub) <= 0.02 * want.sum_sub, scheme
