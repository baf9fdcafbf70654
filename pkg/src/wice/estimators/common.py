"""Shared estimator types and the preamble least-squares estimate."""

from dataclasses import dataclass, field

import numpy as np

from ..frames import FrameGrid, LTS_SEQUENCE


@dataclass
class EstimateGrid:
    """An estimator's channel estimate over the active band and the
    data-region symbols, with provenance metadata.
    """

    h_hat: np.ndarray          # (K_on, I) complex
    method: str
    op_count: "object | None" = None
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if not np.all(np.isfinite(self.h_hat)):
            raise ValueError(f"{self.method}: estimate contains non-finite entries")


def ls_preamble(rx_preambles: np.ndarray,
                pilot_seq: np.ndarray = LTS_SEQUENCE) -> np.ndarray:
    """Average the two received LTS symbols and divide by the known
    sequence: h[k] = (y1[k] + y2[k]) / (2 p[k]).  Averaging halves the
    noise variance.
    """
    rx_preambles = np.asarray(rx_preambles)
    if rx_preambles.shape[0] != 2:
        raise ValueError("expected two preamble symbols")
    assert np.all(pilot_seq != 0)
    return (rx_preambles[0] + rx_preambles[1]) / (2.0 * pilot_seq)


def pilot_cell_ls(frame: FrameGrid) -> np.ndarray:
    """LS at the sparse in-symbol pilot cells of a standard-layout frame,
    stacked symbol by symbol into a vector of length K_p * I.
    """
    spec = frame.spec
    cols = []
    for col in range(spec.n_symbols):
        idx = spec.pilot_subcarrier_idx(col)
        cols.append(frame.symbols[idx, col] / LTS_SEQUENCE[idx])
    return np.concatenate(cols)
