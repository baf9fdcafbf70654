from .common import EstimateGrid, ls_preamble, pilot_cell_ls
from .lmmse import CorrelationModel, lmmse_2d, lmmse_weights
from .rbf import DEFAULT_R0, RbfParams, rbf_interpolate
from .addtt import AddTtParams, add_tt, frequency_average
from .wi import (DftMatrices, NoiseTerm, WiWeightTable, als_pilot,
                 default_dft_matrices, estimate_frame, group_pilots,
                 instrumented_ops, lp_pilot, noise_term,
                 precompute_weight_table, sls_pilot, wi_estimate, wi_weights)

__all__ = [
    "EstimateGrid", "ls_preamble", "pilot_cell_ls",
    "CorrelationModel", "lmmse_2d", "lmmse_weights",
    "DEFAULT_R0", "RbfParams", "rbf_interpolate",
    "AddTtParams", "add_tt", "frequency_average",
    "DftMatrices", "NoiseTerm", "WiWeightTable", "als_pilot",
    "default_dft_matrices", "estimate_frame", "group_pilots",
    "instrumented_ops", "lp_pilot", "noise_term", "precompute_weight_table",
    "sls_pilot", "wi_estimate", "wi_weights",
]
