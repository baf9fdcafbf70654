"""Two-dimensional radial-basis-function interpolation over the sparse
pilot grid (the learned-denoiser front end it was proposed for is out of
scope here; only the interpolation stage is implemented).

Weights solve A w = h_LS with the Gaussian kernel
phi(x, y) = exp(-(x + y)^2 / r0) evaluated on index distances, and every
grid cell is the kernel-weighted sum over all pilot cells.  The kernel
system depends only on the pilot layout and r0, so its factorization is
cached across frames.
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..frames import FrameGrid, K_ON
from .common import EstimateGrid, pilot_cell_ls

log = logging.getLogger(__name__)

# Scale factor from a coarse offline search on VTV-SDWW @ 500 Hz
# (see demos/tune_rbf_scale.py); the kernel shape is layout-dependent
# and there is no canonical value.
DEFAULT_R0 = 510.0


@dataclass(frozen=True)
class RbfParams:
    r0: float = DEFAULT_R0

    def __post_init__(self):
        if self.r0 <= 0:
            raise ValueError("RBF scale factor must be positive")


def rbf_kernel(dx: np.ndarray, dy: np.ndarray, r0: float) -> np.ndarray:
    return np.exp(-((np.abs(dx) + np.abs(dy)) ** 2) / r0)


def pilot_index_vectors(spec) -> tuple[np.ndarray, np.ndarray]:
    """Frequency/time index vectors of the sparse pilot cells, symbol by
    symbol.  Time indices are 1-based symbol positions.
    """
    k_f, k_t = [], []
    for col in range(spec.n_symbols):
        idx = spec.pilot_subcarrier_idx(col)
        k_f.append(idx)
        k_t.append(np.full(idx.size, col + 1))
    return np.concatenate(k_f), np.concatenate(k_t)


_solver_cache: dict[tuple, tuple] = {}


def _kernel_solver(k_f: np.ndarray, k_t: np.ndarray, r0: float):
    """LU factorization of the pilot Gram matrix, plus its condition number."""
    key = (r0, k_f.tobytes(), k_t.tobytes())
    hit = _solver_cache.get(key)
    if hit is not None:
        return hit
    a = rbf_kernel(np.subtract.outer(k_f, k_f), np.subtract.outer(k_t, k_t), r0)
    cond = np.linalg.cond(a)
    log.info("RBF kernel system: n=%d r0=%g cond=%.3e", a.shape[0], r0, cond)
    lu, piv = scipy.linalg.lu_factor(a)
    if len(_solver_cache) > 16:
        _solver_cache.clear()
    _solver_cache[key] = (lu, piv, cond)
    return lu, piv, cond


def rbf_weights(h_ls: np.ndarray, k_f: np.ndarray, k_t: np.ndarray,
                params: RbfParams) -> np.ndarray:
    """Solve the real kernel system against the complex LS right-hand side."""
    lu, piv, _ = _kernel_solver(k_f, k_t, float(params.r0))
    rhs = np.column_stack([h_ls.real, h_ls.imag])
    sol = scipy.linalg.lu_solve((lu, piv), rhs)
    return sol[:, 0] + 1j * sol[:, 1]


def rbf_evaluate(w: np.ndarray, k_f: np.ndarray, k_t: np.ndarray,
                 rows: np.ndarray, cols: np.ndarray, r0: float) -> np.ndarray:
    """Kernel-weighted sum at every (row, col) grid cell, shape
    (len(rows), len(cols)).
    """
    # Split the (|dk| + |di|)^2 exponent per axis so evaluation stays
    # O(rows * cols * pilots) without forming 4-D arrays.
    dk = np.abs(np.subtract.outer(rows, k_f))
    di = np.abs(np.subtract.outer(cols, k_t))
    out = np.empty((rows.size, cols.size), dtype=w.dtype)
    for j in range(cols.size):
        phi = np.exp(-((dk + di[j]) ** 2) / r0)
        out[:, j] = phi @ w
    return out


def rbf_interpolate(rx: FrameGrid, params: RbfParams | None = None) -> EstimateGrid:
    """Interpolate the whole K_on x I grid from the sparse pilot LS values."""
    params = params or RbfParams()
    spec = rx.spec
    if spec.n_pilot_syms != 0:
        raise ValueError("RBF interpolation runs on the standard (sparse pilot) layout")
    n = spec.n_symbols
    h_ls = pilot_cell_ls(rx)
    k_f, k_t = pilot_index_vectors(spec)
    w = rbf_weights(h_ls, k_f, k_t, params)
    h_hat = rbf_evaluate(w, k_f, k_t, np.arange(K_ON), np.arange(1, n + 1),
                         float(params.r0))
    return EstimateGrid(h_hat=h_hat, method="rbf")
