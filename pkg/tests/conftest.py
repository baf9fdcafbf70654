import numpy as np
import pytest

from wice.channel import TdlProfile

# 12 taps on the 100 ns sample grid: channels drawn from this profile lie
# exactly in the span of the first-12-columns DFT slice, so the
# projection-based estimators recover them without model bias.
ON_GRID_PROFILE = TdlProfile(
    name="on-grid",
    tap_delays_ns=tuple(range(0, 1200, 100)),
    tap_gains_db=(0, -1, -3, -5, -8, -10, -13, -16, -19, -22, -25, -28),
    doppler_hz=500.0,
)

FLAT_PROFILE = TdlProfile(
    name="flat", tap_delays_ns=(0,), tap_gains_db=(0.0,), doppler_hz=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def static_profile(base: TdlProfile) -> TdlProfile:
    return TdlProfile(name=base.name + "-static", tap_delays_ns=base.tap_delays_ns,
                      tap_gains_db=base.tap_gains_db, doppler_hz=0.0)
