"""Weighted time interpolation between pilot-symbol channel anchors.

Anchors come from one of three pilot-symbol estimators:

* ``sls`` -- per-subcarrier division by the known pilot sequence;
* ``als`` -- SLS followed by projection onto the span of the first L
  DFT columns (the L-tap channel subspace), which strips the noise
  outside that subspace;
* ``lp``  -- L pilots only, solved through the pilot-row DFT slice and
  re-expanded to the full active band.

Each data symbol's estimate is a 2-weight combination of the bounding
anchors; the weights minimize the mean-square error under the Jakes
time-correlation model and the anchors' noise levels, and can be
precomputed offline into a :class:`WiWeightTable`.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import j0

from ..frames import (FrameGrid, FrameSpec, K_ON, K_TOTAL, LTS_SEQUENCE,
                      SUBCARRIER_OFFSETS, SYMBOL_DURATION, lp_pilot_indices)
from .common import EstimateGrid, ls_preamble

_WEIGHT_JITTER = 1e-9
_SINGULAR_DET = 1e-12

SCHEMES = ("fp-sls", "fp-als", "lp")


class DftMatrices:
    """Active-band and pilot-row slices of the K-point DFT, with their
    pseudo-inverses and the derived interpolation operators.
    """

    def __init__(self, n_taps: int = 12, lp_pilots: int = 12):
        if n_taps > K_ON:
            raise ValueError("tap count cannot exceed the active band size")
        bins = SUBCARRIER_OFFSETS % K_TOTAL
        cols = np.arange(n_taps)
        self.n_taps = n_taps
        self.f_on = np.exp(-2j * np.pi * np.outer(bins, cols) / K_TOTAL) / np.sqrt(K_TOTAL)
        self.f_on_pinv = np.linalg.pinv(self.f_on)
        self.w_als = self.f_on @ self.f_on_pinv

        self.lp_idx = lp_pilot_indices(lp_pilots)
        self.f_p = self.f_on[self.lp_idx, :]
        if np.linalg.cond(self.f_p) > 1e8:
            raise ValueError("pilot-row DFT slice is too ill-conditioned to invert")
        self.f_p_pinv = np.linalg.pinv(self.f_p)
        self.w_dft = self.f_on @ self.f_p_pinv

    def noise_gain(self, scheme: str) -> float:
        """Average per-subcarrier noise amplification of the anchor
        estimate: tr(W W^H) / K_on (1 for SLS).
        """
        if scheme == "fp-sls":
            return 1.0
        if scheme == "fp-als":
            w = self.w_als
        elif scheme == "lp":
            w = self.w_dft
        else:
            raise ValueError(f"unknown WI scheme {scheme!r}")
        return float(np.sum(np.abs(w) ** 2)) / K_ON


@lru_cache(maxsize=8)
def default_dft_matrices(n_taps: int = 12, lp_pilots: int = 12) -> DftMatrices:
    return DftMatrices(n_taps=n_taps, lp_pilots=lp_pilots)


def sls_pilot(rx_pilot_symbol: np.ndarray,
              pilot_seq: np.ndarray = LTS_SEQUENCE) -> np.ndarray:
    """Simple LS at a fully pilot-allocated symbol: y[k] / p[k]."""
    return np.asarray(rx_pilot_symbol) / pilot_seq


def als_pilot(h_sls: np.ndarray, dft: DftMatrices) -> np.ndarray:
    """Project an SLS anchor onto the L-tap DFT subspace."""
    return dft.w_als @ h_sls


def lp_pilot(rx_pilot_cells: np.ndarray, dft: DftMatrices,
             pilot_seq: np.ndarray = LTS_SEQUENCE) -> np.ndarray:
    """Estimate the full active-band channel from the L pilot cells of an
    LP pilot symbol: expand F_p^+ (y/p) through F_on.
    """
    rx_pilot_cells = np.asarray(rx_pilot_cells)
    if rx_pilot_cells.size != dft.lp_idx.size:
        raise ValueError("expected one received value per LP pilot subcarrier")
    h_ls = rx_pilot_cells / pilot_seq[dft.lp_idx]
    return dft.f_on @ (dft.f_p_pinv @ h_ls)


@dataclass(frozen=True)
class NoiseTerm:
    """Per-subcarrier noise power of an anchor estimate."""

    scheme: str
    value: float

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("noise power must be nonnegative")


def noise_term(scheme: str, sigma2: float, dft: DftMatrices) -> NoiseTerm:
    """Anchor noise power per subcarrier: sigma^2 for SLS, scaled by
    tr(W W^H)/K_on for the projected/expanded schemes, sigma^2/2 for the
    two-symbol preamble average.
    """
    if scheme == "preamble":
        return NoiseTerm(scheme, sigma2 / 2.0)
    return NoiseTerm(scheme, sigma2 * dft.noise_gain(scheme))


def group_pilots(anchors: list[np.ndarray]) -> list[np.ndarray]:
    """Pair consecutive anchors: [h_0, h_1], [h_1, h_2], ...  ``anchors``
    starts with the preamble estimate h_0.
    """
    if len(anchors) < 2:
        raise ValueError("need the preamble anchor plus at least one pilot symbol")
    return [np.column_stack([anchors[q - 1], anchors[q]]) for q in range(1, len(anchors))]


def wi_weights(doppler_hz: float, symbol_duration: float, n_data: int,
               e_lead: float, e_trail: float) -> np.ndarray:
    """Interpolation weight matrix C (2 x n_data) for one subframe.

    Column f (1-based data position) solves the 2x2 MMSE system built
    from the Jakes correlations at lags (f-1) and (n_data+1-f) and the
    anchor noise powers.  A singular system (static noiseless anchors)
    is regularized with a tiny diagonal jitter.
    """
    if e_lead < 0 or e_trail < 0:
        raise ValueError("anchor noise powers must be nonnegative")
    if n_data < 1:
        raise ValueError("subframe must contain at least one data symbol")
    a = 2.0 * np.pi * doppler_hz * symbol_duration
    f = np.arange(1, n_data + 1)
    rhs = np.column_stack([j0(a * (f - 1)), j0(a * (n_data + 1 - f))])  # (n_data, 2)
    rho = j0(a * n_data)
    gram = np.array([[1.0 + e_lead, rho], [rho, 1.0 + e_trail]])
    if abs(np.linalg.det(gram)) < _SINGULAR_DET:
        gram = gram + np.eye(2) * _WEIGHT_JITTER
    return np.linalg.solve(gram, rhs.T)


def wi_estimate(anchor_pair: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """Apply one subframe's weights: (K_on x 2) @ (2 x I_f)."""
    anchor_pair = np.asarray(anchor_pair)
    if anchor_pair.ndim != 2 or anchor_pair.shape[1] != 2 or weights.shape[0] != 2:
        raise ValueError("expected a K_on x 2 anchor pair and 2 x I_f weights")
    return anchor_pair @ weights


class WiWeightTable:
    """Immutable-after-build cache of weight matrices keyed by
    (f_d, T_s, I_f, E_lead, E_trail).  Entries equal fresh computations
    bit for bit.
    """

    def __init__(self):
        self._entries: dict[tuple, np.ndarray] = {}

    def __len__(self) -> int:
        return len(self._entries)

    @staticmethod
    def _key(doppler_hz, symbol_duration, n_data, e_lead, e_trail) -> tuple:
        return (float(doppler_hz), float(symbol_duration), int(n_data),
                float(e_lead), float(e_trail))

    def add(self, doppler_hz, symbol_duration, n_data, e_lead, e_trail) -> np.ndarray:
        key = self._key(doppler_hz, symbol_duration, n_data, e_lead, e_trail)
        if key not in self._entries:
            self._entries[key] = wi_weights(*key)
        return self._entries[key]

    def get(self, doppler_hz, symbol_duration, n_data, e_lead, e_trail) -> np.ndarray | None:
        return self._entries.get(self._key(doppler_hz, symbol_duration, n_data,
                                           e_lead, e_trail))

    def lookup(self, doppler_hz, symbol_duration, n_data, e_lead, e_trail) -> np.ndarray:
        """Cached entry when present, else a fresh computation (not stored)."""
        hit = self.get(doppler_hz, symbol_duration, n_data, e_lead, e_trail)
        if hit is not None:
            return hit
        return wi_weights(doppler_hz, symbol_duration, n_data, e_lead, e_trail)

    def items(self):
        return self._entries.items()

    def save(self, path) -> None:
        from ..datasets import write_weight_table
        write_weight_table(self, path)

    @classmethod
    def load(cls, path) -> "WiWeightTable":
        from ..datasets import read_weight_table
        return read_weight_table(path)


def precompute_weight_table(doppler_grid=(0.0, 250.0, 500.0, 1000.0),
                            pilot_counts=(1, 2, 3),
                            snr_grid_db=tuple(range(0, 41, 5)),
                            n_symbols: int = 100,
                            schemes=SCHEMES,
                            dft: DftMatrices | None = None) -> WiWeightTable:
    """Offline weight precomputation over the scenario grid: Doppler
    values x frame structures x SNR points x anchor schemes.
    """
    dft = dft or default_dft_matrices()
    table = WiWeightTable()
    for fd in doppler_grid:
        for p in pilot_counts:
            spec = FrameSpec(n_symbols=n_symbols, n_pilot_syms=p,
                             scheme="LP" if "lp" in schemes else "FP")
            for snr_db in snr_grid_db:
                sigma2 = 10.0 ** (-snr_db / 10.0)
                e_pre = noise_term("preamble", sigma2, dft).value
                for scheme in schemes:
                    e_pilot = noise_term(scheme, sigma2, dft).value
                    for q, n_data in enumerate(spec.subframe_data_counts):
                        e_lead = e_pre if q == 0 else e_pilot
                        table.add(fd, SYMBOL_DURATION, n_data, e_lead, e_pilot)
    return table


def instrumented_ops(spec: FrameSpec, scheme: str,
                     dft: DftMatrices | None = None):
    """Real-operation tally of the linear pipeline as actually executed,
    using the costing conventions of the published analysis (complex
    division = 8 mul/div + 3 sum/sub, complex multiplication = 4 + 3,
    division by a real pilot = 2 divisions, real-weight combination of a
    complex pair = 4 mul + 2 sums per cell).
    """
    from ..metrics import OpCount

    dft = dft or default_dft_matrices(lp_pilots=spec.n_lp_pilots)
    kon = K_ON
    # Preamble LS: K_on complex additions, then division by the real 2p[k].
    mul, add = 2 * kon, 2 * kon
    for _ in spec.pilot_symbol_cols:
        if scheme == "fp-sls":
            mul += 2 * kon                                 # divide by BPSK pilots
        elif scheme == "fp-als":
            mul += 2 * kon                                 # SLS first
            mul += 4 * kon * kon                           # W_ALS matvec products
            add += 3 * kon * kon + 2 * kon * (kon - 1)     # products + accumulation
        elif scheme == "lp":
            ll = dft.lp_idx.size
            mul += 2 * ll                                  # divide at the L pilot cells
            mul += 4 * kon * ll                            # W_DFT matvec products
            add += 3 * kon * ll + 2 * kon * (ll - 1)
        else:
            raise ValueError(f"unknown WI scheme {scheme!r}")
    # Two real weights applied to two complex anchors per data cell.
    n_data_cells = kon * sum(spec.subframe_data_counts)
    mul += 4 * n_data_cells
    add += 2 * n_data_cells
    return OpCount(mul_div=mul, sum_sub=add)


def estimate_frame(rx: FrameGrid, doppler_hz: float, sigma2: float,
                   scheme: str = "fp-sls",
                   dft: DftMatrices | None = None,
                   table: WiWeightTable | None = None) -> EstimateGrid:
    """Full weighted-interpolation pipeline for one received frame.

    Data-symbol columns get the two-anchor weighted estimate; pilot-symbol
    columns carry their own anchor estimate (LP pilot symbols also carry
    data, so those columns are needed for detection).
    """
    spec = rx.spec
    if scheme not in SCHEMES:
        raise ValueError(f"unknown WI scheme {scheme!r}")
    if spec.n_pilot_syms < 1:
        raise ValueError("weighted interpolation needs at least one inserted pilot symbol")
    if scheme.startswith("fp") and spec.scheme != "FP":
        raise ValueError("FP anchor schemes require an FP frame structure")
    if scheme == "lp" and spec.scheme != "LP":
        raise ValueError("the LP anchor scheme requires an LP frame structure")
    dft = dft or default_dft_matrices(lp_pilots=spec.n_lp_pilots)

    anchors = [ls_preamble(rx.preambles)]
    for col in rx.pilot_symbol_cols:
        if scheme == "fp-sls":
            anchors.append(sls_pilot(rx.symbols[:, col]))
        elif scheme == "fp-als":
            anchors.append(als_pilot(sls_pilot(rx.symbols[:, col]), dft))
        else:
            anchors.append(lp_pilot(rx.symbols[dft.lp_idx, col], dft))

    e_pre = noise_term("preamble", sigma2, dft).value
    e_pilot = noise_term(scheme, sigma2, dft).value

    h_hat = np.empty((K_ON, spec.n_symbols), dtype=complex)
    pairs = group_pilots(anchors)
    start = 0
    for q, (pair, n_data) in enumerate(zip(pairs, spec.subframe_data_counts)):
        e_lead = e_pre if q == 0 else e_pilot
        if table is not None:
            weights = table.lookup(doppler_hz, SYMBOL_DURATION, n_data, e_lead, e_pilot)
        else:
            weights = wi_weights(doppler_hz, SYMBOL_DURATION, n_data, e_lead, e_pilot)
        h_hat[:, start:start + n_data] = wi_estimate(pair, weights)
        h_hat[:, start + n_data] = pair[:, 1]  # the pilot symbol itself
        start += n_data + 1
    assert start == spec.n_symbols

    return EstimateGrid(h_hat=h_hat, method=f"wi-{scheme}",
                        op_count=instrumented_ops(spec, scheme, dft))
