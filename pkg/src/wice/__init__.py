"""Link-level simulation and channel estimation for IEEE 802.11p
doubly selective vehicular channels.
"""

from .frames import (FrameGrid, FrameSpec, K_DATA, K_ON, K_PILOT, K_TOTAL,
                     LTS_SEQUENCE, SUBCARRIER_SPACING, SYMBOL_DURATION,
                     build_frame, buffering_time, tdr)
from .modulation import demap_hard, hard_decision, map_bits
from .channel import (PROFILES, ChannelRealization, TdlProfile, apply_channel,
                      coherence_interval, noise_variance, sample_channel)
from .estimators import (AddTtParams, CorrelationModel, DftMatrices,
                         EstimateGrid, RbfParams, WiWeightTable, add_tt,
                         als_pilot, estimate_frame, lmmse_2d, lp_pilot,
                         ls_preamble, noise_term, rbf_interpolate, sls_pilot,
                         wi_estimate, wi_weights)
from .metrics import (ComplexityParams, OpCount, ber, complexity,
                      complexity_ratio, complexity_table, nmse)
from .datasets import (DatasetRecord, complex_stack, complex_unstack,
                       read_dataset, write_dataset)
from .config import ExperimentConfig
from .runner import eval_predictions, export_dataset, simulate

__version__ = "0.1.0"
