"""Channel model statistics: Jakes autocorrelation, power conservation,
frequency correlation, noise calibration, determinism."""

import numpy as np
import pytest
from scipy.special import j0

from conftest import ON_GRID_PROFILE
from wice.channel import (PROFILES, TdlProfile, apply_channel,
                          coherence_interval, noise_variance,
                          sample_channel, sample_tap_processes,
                          steering_matrix)
from wice.frames import (FrameSpec, SUBCARRIER_OFFSETS, SUBCARRIER_SPACING,
                         SYMBOL_DURATION, build_frame)


class TestProfiles:
    def test_builtin_profiles(self):
        uc = PROFILES["VTV-UC"]
        assert uc.n_taps == 12
        assert uc.doppler_hz == 250.0
        assert list(uc.tap_gains_db[:3]) == [0, 0, -10]
        for prof in PROFILES.values():
            assert prof.n_taps == 12
            assert prof.tap_powers.sum() == pytest.approx(1.0)

    def test_delay_validation(self):
        with pytest.raises(ValueError):
            TdlProfile("bad", (100, 0), (0, 0), 100.0)     # decreasing
        with pytest.raises(ValueError):
            TdlProfile("bad", (0, 1700), (0, 0), 100.0)    # beyond guard


class TestTapProcesses:
    def test_zero_doppler_taps_constant(self):
        chan = sample_channel(PROFILES["VTV-UC"], FrameSpec(n_symbols=50), 3)
        static = TdlProfile("s", PROFILES["VTV-UC"].tap_delays_ns,
                            PROFILES["VTV-UC"].tap_gains_db, 0.0)
        chan0 = sample_channel(static, FrameSpec(n_symbols=50), 3)
        assert np.allclose(chan0.taps, chan0.taps[:, :1])
        assert not np.allclose(chan.taps, chan.taps[:, :1])

    @pytest.mark.parametrize("fd", [250.0, 1000.0])
    def test_autocorrelation_matches_bessel(self, fd):
        # Monte-Carlo oracle: lag-m sample autocorrelation over many
        # independent realizations vs the J0 reference
        rng = np.random.default_rng(11)
        n_real, n_lags = 30_000, 12
        x = sample_tap_processes(fd, n_real, n_lags, rng)
        est = (x[:, 0:1].conj() * x).mean(axis=0).real
        ref = j0(2 * np.pi * fd * np.arange(n_lags) * SYMBOL_DURATION)
        assert np.max(np.abs(est - ref)) < 0.02

    def test_unit_power(self):
        rng = np.random.default_rng(5)
        x = sample_tap_processes(500.0, 20_000, 8, rng)
        assert np.mean(np.abs(x) ** 2) == pytest.approx(1.0, rel=0.02)


class TestFrequencyResponse:
    def test_power_conservation(self):
        # 1e5 independent single-epoch realizations (per-frame means are
        # dominated by the slow fading of the two strongest taps)
        prof = PROFILES["VTV-SDWW-500"]
        rng = np.random.default_rng(9)
        n = 100_000
        g = (rng.standard_normal((prof.n_taps, n))
             + 1j * rng.standard_normal((prof.n_taps, n))) / np.sqrt(2)
        g *= np.sqrt(prof.tap_powers)[:, None]
        h = steering_matrix(prof) @ g
        assert np.mean(np.abs(h) ** 2) == pytest.approx(1.0, abs=0.01)

    def test_sampled_frame_power_sane(self):
        spec = FrameSpec(n_symbols=20)
        acc = [np.mean(np.abs(sample_channel(PROFILES["VTV-SDWW-500"], spec, s)
                              .freq_response) ** 2) for s in range(400)]
        assert np.mean(acc) == pytest.approx(1.0, abs=0.15)

    def test_frequency_correlation_matches_pdp(self):
        # E[H[k] H*[k+1]] equals the PDP transform at one subcarrier lag
        prof = PROFILES["VTV-SDWW-500"]
        spec = FrameSpec(n_symbols=10)
        h = np.concatenate(
            [sample_channel(prof, spec, s).freq_response for s in range(1500)], axis=1)
        lag0 = np.mean(np.abs(h) ** 2)
        # unit-spacing pairs only (the DC gap between offsets -1 and +1 is 2 bins)
        pairs = np.r_[0:25, 26:51]
        lag1 = np.mean(h[pairs].conj() * h[pairs + 1])
        f = SUBCARRIER_OFFSETS * SUBCARRIER_SPACING
        df = f[1] - f[0]
        tau = np.asarray(prof.tap_delays_ns) * 1e-9
        ref1 = np.sum(prof.tap_powers * np.exp(2j * np.pi * df * tau))
        assert lag0 == pytest.approx(1.0, abs=0.02)
        assert abs(lag1 - ref1.conj()) < 0.02

    def test_determinism(self):
        spec = FrameSpec(n_symbols=30)
        a = sample_channel(PROFILES["VTV-UC"], spec, 42)
        b = sample_channel(PROFILES["VTV-UC"], spec, 42)
        assert np.array_equal(a.freq_response, b.freq_response)
        assert np.array_equal(a.noise, b.noise)

    def test_on_grid_profile_lies_in_dft_span(self):
        chan = sample_channel(ON_GRID_PROFILE, FrameSpec(n_symbols=5), 1)
        from wice.estimators import default_dft_matrices
        dft = default_dft_matrices()
        proj = dft.w_als @ chan.freq_response
        assert np.allclose(proj, chan.freq_response, atol=1e-10)


class TestApplyChannel:
    def test_noiseless_is_exact_product(self):
        spec = FrameSpec(n_symbols=10)
        frame = build_frame(spec, rng=0)
        chan = sample_channel(PROFILES["VTV-UC"], spec, 0)
        rx = apply_channel(frame, chan, None)
        assert np.allclose(rx.symbols, frame.symbols * chan.freq_response[:, 1:])
        rx_inf = apply_channel(frame, chan, np.inf)
        assert np.array_equal(rx_inf.symbols, rx.symbols)

    def test_all_ones_symbol_returns_channel_row(self):
        spec = FrameSpec(n_symbols=3, n_pilot_syms=1)  # FP pilot symbol is +-1
        frame = build_frame(spec, rng=0)
        chan = sample_channel(PROFILES["VTV-UC"], spec, 1)
        rx = apply_channel(frame, chan, None)
        col = spec.pilot_symbol_cols[0]
        assert np.allclose(rx.symbols[:, col] / frame.symbols[:, col],
                           chan.freq_response[:, col + 1])

    def test_snr_calibration(self):
        spec = FrameSpec(n_symbols=20)
        sig_pow, noise_pow = 0.0, 0.0
        for seed in range(300):
            frame = build_frame(spec, rng=seed)
            chan = sample_channel(PROFILES["VTV-SDWW-500"], spec, seed)
            clean = apply_channel(frame, chan, None)
            noisy = apply_channel(frame, chan, 10.0)
            sig_pow += np.mean(np.abs(clean.symbols) ** 2)
            noise_pow += np.mean(np.abs(noisy.symbols - clean.symbols) ** 2)
        assert noise_pow / sig_pow == pytest.approx(0.1, rel=0.05)

    def test_dim_mismatch_rejected(self):
        frame = build_frame(FrameSpec(n_symbols=10), rng=0)
        chan = sample_channel(PROFILES["VTV-UC"], FrameSpec(n_symbols=11), 0)
        with pytest.raises(ValueError):
            apply_channel(frame, chan, 10.0)


class TestCoherenceInterval:
    def test_very_high_mobility(self):
        spec = FrameSpec(n_symbols=100, n_pilot_syms=3)
        dc = coherence_interval(spec, 1000.0)
        assert dc / SYMBOL_DURATION == pytest.approx(33e3)

    def test_low_and_high_mobility_match(self):
        assert coherence_interval(FrameSpec(n_symbols=100, n_pilot_syms=1), 250.0) \
            / SYMBOL_DURATION == pytest.approx(25e3)
        assert coherence_interval(FrameSpec(n_symbols=100, n_pilot_syms=2), 500.0) \
            / SYMBOL_DURATION == pytest.approx(25e3)

    def test_zero_doppler(self):
        assert coherence_interval(FrameSpec(n_symbols=100, n_pilot_syms=2), 0.0) == 0.0


def test_noise_variance():
    assert noise_variance(10.0) == pytest.approx(0.1)
    assert noise_variance(None) == 0.0
    assert noise_variance(np.inf) == 0.0
