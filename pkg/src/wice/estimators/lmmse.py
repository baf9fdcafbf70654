"""Two-dimensional LMMSE channel estimation over the sparse pilot grid.

The estimator stacks the LS values at every in-symbol pilot cell of the
frame (or of a subframe window) into one observation vector and applies

    H_hat = R_cross (R_pp + sigma^2 I)^{-1} h_LS

where the correlations are separable: Jakes time correlation
J0(2*pi*f_d*di*T_s) times the frequency correlation given by the
power-delay profile.  The pilot index sets may differ between symbols
(staggered sparse layout).  The combining matrix depends only on the
layout, the Doppler, the profile and sigma^2, so it is cached and reused
across frames.
"""

import logging
from dataclasses import dataclass

import numpy as np
from scipy.special import j0

from ..frames import FrameGrid, K_ON, SUBCARRIER_OFFSETS, SUBCARRIER_SPACING, SYMBOL_DURATION
from .common import EstimateGrid, pilot_cell_ls

log = logging.getLogger(__name__)

_JITTER = 1e-12


@dataclass(frozen=True)
class CorrelationModel:
    """Separable channel correlation: Jakes in time, PDP-DFT in frequency."""

    doppler_hz: float
    tap_delays_s: tuple
    tap_powers: tuple
    symbol_duration: float = SYMBOL_DURATION

    @classmethod
    def from_profile(cls, profile) -> "CorrelationModel":
        return cls(doppler_hz=profile.doppler_hz,
                   tap_delays_s=tuple(d * 1e-9 for d in profile.tap_delays_ns),
                   tap_powers=tuple(profile.tap_powers))

    def time_corr(self, lag_symbols: np.ndarray) -> np.ndarray:
        return j0(2.0 * np.pi * self.doppler_hz * self.symbol_duration
                  * np.asarray(lag_symbols, dtype=float))

    def freq_corr(self, idx_a: np.ndarray, idx_b: np.ndarray) -> np.ndarray:
        """R_f between active-band subcarrier indices (outer product shape)."""
        f = SUBCARRIER_OFFSETS * SUBCARRIER_SPACING
        df = np.subtract.outer(f[np.asarray(idx_a)], f[np.asarray(idx_b)])
        p = np.asarray(self.tap_powers)
        tau = np.asarray(self.tap_delays_s)
        return np.tensordot(np.exp(-2j * np.pi * df[..., None] * tau), p, axes=([-1], [0]))

    def cell_corr(self, cells_a, cells_b) -> np.ndarray:
        """Correlation between (subcarrier, symbol) cell lists."""
        sub_a, sym_a = cells_a
        sub_b, sym_b = cells_b
        return (self.freq_corr(sub_a, sub_b)
                * self.time_corr(np.subtract.outer(sym_a, sym_b)))


def lmmse_weights(model: CorrelationModel, sigma2: float,
                  pilot_cells, grid_cells) -> np.ndarray:
    """Combining matrix mapping pilot LS observations to grid estimates.

    Cells are (subcarrier_indices, symbol_indices) pairs of equal length.
    A singular observation Gram is retried with a tiny diagonal jitter.
    """
    r_pp = model.cell_corr(pilot_cells, pilot_cells)
    r_gp = model.cell_corr(grid_cells, pilot_cells)
    a = r_pp + sigma2 * np.eye(r_pp.shape[0])
    try:
        return np.linalg.solve(a.conj().T, r_gp.conj().T).conj().T
    except np.linalg.LinAlgError:
        log.warning("LMMSE system singular; retrying with %g diagonal jitter", _JITTER)
        a = a + _JITTER * np.eye(a.shape[0])
        return np.linalg.solve(a.conj().T, r_gp.conj().T).conj().T


def _block_cells(spec, cols) -> tuple[np.ndarray, np.ndarray]:
    subs, syms = [], []
    for col in cols:
        idx = spec.pilot_subcarrier_idx(col)
        subs.append(idx)
        syms.append(np.full(idx.size, col))
    return np.concatenate(subs), np.concatenate(syms)


_weight_cache: dict[tuple, np.ndarray] = {}


def _cached_block_weights(model: CorrelationModel, sigma2: float, spec,
                          cols: np.ndarray) -> np.ndarray:
    key = (model, float(sigma2), spec.pilot_layout, int(cols[0]), int(cols.size))
    w = _weight_cache.get(key)
    if w is None:
        pilot_cells = _block_cells(spec, cols)
        g_sub = np.tile(np.arange(K_ON), cols.size)
        g_sym = np.repeat(cols, K_ON)
        w = lmmse_weights(model, sigma2, pilot_cells, (g_sub, g_sym))
        if len(_weight_cache) > 256:
            _weight_cache.clear()
        _weight_cache[key] = w
    return w


def lmmse_2d(rx: FrameGrid, model: CorrelationModel, sigma2: float,
             window: int | None = None) -> EstimateGrid:
    """Estimate the whole frame; ``window`` selects the subframe mode
    (e.g. 10-symbol blocks) instead of the full-frame observation.
    """
    spec = rx.spec
    if spec.n_pilot_syms != 0:
        raise ValueError("2D LMMSE runs on the standard (sparse pilot) layout")
    n = spec.n_symbols
    window = n if not window else int(window)
    if not 1 <= window <= n:
        raise ValueError("window must be in 1..I")

    h_ls = pilot_cell_ls(rx)
    h_hat = np.empty((K_ON, n), dtype=complex)
    pos = 0
    for start in range(0, n, window):
        cols = np.arange(start, min(start + window, n))
        w = _cached_block_weights(model, float(sigma2), spec, cols)
        n_obs = sum(spec.pilot_subcarrier_idx(c).size for c in cols)
        obs = h_ls[pos:pos + n_obs]
        h_hat[:, cols] = (w @ obs).reshape(cols.size, K_ON).T
        pos += n_obs
    return EstimateGrid(h_hat=h_hat, method=f"lmmse-{window}")
