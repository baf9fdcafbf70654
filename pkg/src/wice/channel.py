"""Time-variant tapped-delay-line Rayleigh channels with a Jakes Doppler
spectrum, per-symbol frequency responses, and AWGN application.

Each tap is a stationary complex Gaussian process sampled once per OFDM
symbol epoch with autocorrelation J0(2*pi*f_d*tau).  Tap processes are
drawn by covariance shaping (eigendecomposition of the J0 Toeplitz
matrix), which makes the ensemble autocorrelation exact.  Fractional tap
delays enter the frequency response directly via
H[k] = sum_l g_l * exp(-j*2*pi*f_k*tau_l), avoiding sample-grid
quantization.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import j0

from .frames import (FrameGrid, FrameSpec, GUARD_INTERVAL, K_ON,
                     SUBCARRIER_OFFSETS, SUBCARRIER_SPACING, SYMBOL_DURATION)


@dataclass(frozen=True)
class TdlProfile:
    """Tapped-delay-line power/delay profile with a maximum Doppler shift."""

    name: str
    tap_delays_ns: tuple
    tap_gains_db: tuple
    doppler_hz: float
    velocity_kmh: float | None = None

    def __post_init__(self):
        delays = np.asarray(self.tap_delays_ns, dtype=float)
        if delays.size < 1 or len(self.tap_gains_db) != delays.size:
            raise ValueError("tap delay/gain lists must be nonempty and equal length")
        if delays.min() < 0 or np.any(np.diff(delays) < 0):
            raise ValueError("tap delays must be nonnegative and nondecreasing")
        if delays.max() >= GUARD_INTERVAL * 1e9:
            raise ValueError("maximum tap delay must stay below the guard interval")
        if self.doppler_hz < 0:
            raise ValueError("Doppler shift must be nonnegative")

    @property
    def n_taps(self) -> int:
        return len(self.tap_delays_ns)

    @property
    def tap_powers(self) -> np.ndarray:
        """Linear tap powers normalized to unit total power."""
        p = 10.0 ** (np.asarray(self.tap_gains_db, dtype=float) / 10.0)
        return p / p.sum()


# Vehicle-to-vehicle TDL models (Doppler in Hz, velocity in km/h).
PROFILES = {
    "VTV-UC": TdlProfile(
        name="VTV-UC",
        tap_delays_ns=(0, 1, 100, 101, 102, 200, 201, 202, 300, 301, 400, 401),
        tap_gains_db=(0, 0, -10, -10, -10, -17.8, -17.8, -17.8, -21.1, -21.1, -26.3, -26.3),
        doppler_hz=250.0,
        velocity_kmh=45.0,
    ),
    "VTV-SDWW-500": TdlProfile(
        name="VTV-SDWW-500",
        tap_delays_ns=(0, 1, 100, 101, 200, 300, 400, 401, 500, 600, 700, 701),
        tap_gains_db=(0, 0, -11.2, -11.2, -19, -21.9, -25.3, -25.3, -24.4, -28, -26.1, -26.1),
        doppler_hz=500.0,
        velocity_kmh=100.0,
    ),
    "VTV-SDWW-1000": TdlProfile(
        name="VTV-SDWW-1000",
        tap_delays_ns=(0, 1, 100, 101, 200, 300, 400, 401, 500, 600, 700, 701),
        tap_gains_db=(0, 0, -11.2, -11.2, -19, -21.9, -25.3, -25.3, -24.4, -28, -26.1, -26.1),
        doppler_hz=1000.0,
        velocity_kmh=200.0,
    ),
}


@dataclass
class ChannelRealization:
    """One frame's channel: tap gains and frequency response per symbol
    epoch (column 0 = preamble epoch, columns 1..I = data-region symbols)
    plus unit-variance noise draws (two preamble columns, then I symbols).
    ``sigma2`` records the noise variance last applied by apply_channel.
    """

    profile: TdlProfile
    taps: np.ndarray       # (n_taps, I+1) complex
    freq_response: np.ndarray  # (K_on, I+1) complex
    noise: np.ndarray      # (K_on, I+2) complex, unit variance
    sigma2: float | None = None

    @property
    def H(self) -> np.ndarray:
        return self.freq_response


@lru_cache(maxsize=64)
def _time_cov_factor(doppler_hz: float, n_epochs: int, spacing_s: float) -> np.ndarray:
    """Factor F with F F^H = Toeplitz(J0(2*pi*f_d*m*T_s)), via eigh with
    tiny negative eigenvalues clipped (the J0 matrix is near-singular for
    slow fading).
    """
    lags = np.arange(n_epochs) * spacing_s
    cov = j0(2.0 * np.pi * doppler_hz * lags)
    c = np.empty((n_epochs, n_epochs))
    idx = np.abs(np.subtract.outer(np.arange(n_epochs), np.arange(n_epochs)))
    c[:] = cov[idx]
    w, v = np.linalg.eigh(c)
    w = np.clip(w, 0.0, None)
    w[w < w[-1] * 1e-12] = 0.0  # drop eigh noise (exact for f_d = 0)
    return v * np.sqrt(w)


def sample_tap_processes(doppler_hz: float, n_taps: int, n_epochs: int,
                         rng: np.random.Generator,
                         spacing_s: float = SYMBOL_DURATION) -> np.ndarray:
    """Draw mutually independent unit-power Jakes tap processes,
    shape (n_taps, n_epochs).
    """
    factor = _time_cov_factor(float(doppler_hz), int(n_epochs), float(spacing_s))
    g = (rng.standard_normal((n_epochs, n_taps))
         + 1j * rng.standard_normal((n_epochs, n_taps))) / np.sqrt(2.0)
    return (factor @ g).T


def steering_matrix(profile: TdlProfile) -> np.ndarray:
    """(K_on, n_taps) map from tap gains to active-band frequency response."""
    f_k = SUBCARRIER_OFFSETS * SUBCARRIER_SPACING
    tau = np.asarray(profile.tap_delays_ns, dtype=float) * 1e-9
    return np.exp(-2j * np.pi * np.outer(f_k, tau))


def sample_channel(profile: TdlProfile, spec: FrameSpec,
                   rng: np.random.Generator | int | None = None) -> ChannelRealization:
    """Draw one channel realization for a frame of ``spec.n_symbols``
    data-region symbols (plus the preamble epoch).
    """
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    n_epochs = spec.n_symbols + 1
    taps = sample_tap_processes(profile.doppler_hz, profile.n_taps, n_epochs, gen)
    taps *= np.sqrt(profile.tap_powers)[:, None]
    h = steering_matrix(profile) @ taps
    noise = (gen.standard_normal((K_ON, spec.n_symbols + 2))
             + 1j * gen.standard_normal((K_ON, spec.n_symbols + 2))) / np.sqrt(2.0)
    return ChannelRealization(profile=profile, taps=taps, freq_response=h, noise=noise)


def noise_variance(snr_db: float | None) -> float:
    """Noise variance per complex sample under unit signal and channel power."""
    if snr_db is None or math.isinf(snr_db):
        return 0.0
    return 10.0 ** (-snr_db / 10.0)


def apply_channel(frame: FrameGrid, chan: ChannelRealization,
                  snr_db: float | None) -> FrameGrid:
    """y_i[k] = h_i[k] x_i[k] + v_i[k].  Both preamble symbols pass
    through the preamble-epoch channel column; ``snr_db=None`` or +inf
    disables noise.
    """
    if chan.freq_response.shape != (frame.symbols.shape[0], frame.symbols.shape[1] + 1):
        raise ValueError("channel realization dimensions do not match the frame")
    sigma = math.sqrt(noise_variance(snr_db))
    rx_pre = frame.preambles * chan.freq_response[:, 0] + sigma * chan.noise[:, :2].T
    rx_syms = frame.symbols * chan.freq_response[:, 1:] + sigma * chan.noise[:, 2:]
    chan.sigma2 = sigma * sigma
    return FrameGrid(spec=frame.spec, preambles=rx_pre, symbols=rx_syms,
                     payload_bits=frame.payload_bits)


def coherence_interval(spec: FrameSpec, doppler_hz: float) -> float:
    """Pilot-spacing coherence product Delta_p * f_d * T_s (dimensionless;
    divide by T_s to express it in symbol-duration units).  Delta_p is the
    symbol spacing between successive pilot anchors: I for P <= 1,
    floor(I/P) otherwise.
    """
    if spec.n_pilot_syms >= 2:
        delta_p = spec.n_symbols // spec.n_pilot_syms
    else:
        delta_p = spec.n_symbols
    return delta_p * doppler_hz * SYMBOL_DURATION
