"""Accurate decision-directed channel tracking with time truncation.

Symbol-by-symbol on the standard frame: equalize by the previous
estimate, hard-demap, re-estimate per subcarrier from the decisions,
least-squares-fit L time-domain taps over the active band (and expand
back), then smooth across frequency with a uniform window and across
time with a one-pole average.
"""

from dataclasses import dataclass

import numpy as np

from ..frames import FrameGrid, K_ON, LTS_SEQUENCE
from .. import modulation
from .common import EstimateGrid, ls_preamble
from .wi import DftMatrices, default_dft_matrices


@dataclass(frozen=True)
class AddTtParams:
    alpha: float = 0.5      # time-averaging weight
    beta: int = 2           # frequency window half-width
    n_taps: int = 12        # truncation tap count

    def __post_init__(self):
        if not 0.0 < self.alpha <= 1.0:
            raise ValueError("alpha must be in (0, 1]")
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")


def frequency_average(h: np.ndarray, beta: int) -> np.ndarray:
    """Uniform window of half-width beta, clipped at the band edges with
    renormalized weights (beta=0 is the identity).
    """
    if beta == 0:
        return h.copy()
    out = np.empty_like(h)
    n = h.size
    for k in range(n):
        lo, hi = max(0, k - beta), min(n, k + beta + 1)
        out[k] = h[lo:hi].mean()
    return out


def add_tt(rx: FrameGrid, params: AddTtParams | None = None,
           dft: DftMatrices | None = None) -> EstimateGrid:
    """Track the channel through the data region of a standard frame."""
    params = params or AddTtParams()
    spec = rx.spec
    if spec.n_pilot_syms != 0:
        raise ValueError("ADD-TT runs on the standard pilot layout")
    dft = dft or default_dft_matrices(n_taps=params.n_taps)
    if dft.n_taps != params.n_taps:
        dft = DftMatrices(n_taps=params.n_taps)

    h_prev = ls_preamble(rx.preambles)
    h_hat = np.empty((K_ON, spec.n_symbols), dtype=complex)
    for i in range(spec.n_symbols):
        y = rx.symbols[:, i]
        y_eq = y / h_prev
        d = np.empty(K_ON, dtype=complex)
        d_idx = spec.data_subcarrier_idx(i)
        p_idx = spec.pilot_subcarrier_idx(i)
        d[d_idx] = modulation.hard_decision(y_eq[d_idx], spec.mod_order)
        d[p_idx] = LTS_SEQUENCE[p_idx]  # pilot cells are known, not demapped
        h_dd = y / d
        h_tt = dft.w_als @ h_dd  # L-tap fit over the active band
        h_ftt = frequency_average(h_tt, params.beta)
        h_prev = (1.0 - params.alpha) * h_prev + params.alpha * h_ftt
        h_hat[:, i] = h_prev
    return EstimateGrid(h_hat=h_hat, method="addtt")
