"""IEEE 802.11p frequency-domain frame construction.

Supports the standard layout (4 pilot subcarriers in every data symbol)
and the modified structures that insert P in {1,2,3} pilot OFDM symbols,
either fully pilot-allocated (FP) or carrying L equally spaced pilots
with the remaining subcarriers used for data (LP).  Also provides the
transmission-data-rate and buffering-time accounting for each structure.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from . import modulation

# 802.11p PHY constants (10 MHz profile).
K_TOTAL = 64
K_ON = 52
K_DATA = 48
K_PILOT = 4
SYMBOL_DURATION = 8e-6  # s
SYMBOL_DURATION_US = 8.0
SUBCARRIER_SPACING = 156.25e3  # Hz
GUARD_INTERVAL = 1.6e-6  # s
SAMPLE_PERIOD = 1.0 / (K_TOTAL * SUBCARRIER_SPACING)  # 100 ns

# Active subcarrier offsets relative to DC: -26..-1, +1..+26.
SUBCARRIER_OFFSETS = np.concatenate([np.arange(-26, 0), np.arange(1, 27)])

# Long training symbol, BPSK values on the active subcarriers (-26..+26,
# DC excluded).  Reused as the pilot sequence p[k] for inserted pilot
# symbols and for the in-symbol pilot tones.
LTS_SEQUENCE = np.array(
    [1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1, 1, 1, -1, -1, 1, 1, -1, 1, -1, 1, 1, 1, 1,
     1, -1, -1, 1, 1, -1, 1, -1, 1, -1, -1, -1, -1, -1, 1, 1, -1, -1, 1, -1, 1, -1, 1, 1, 1, 1],
    dtype=float,
)

# Standard pilot tones at subcarriers {-21, -7, +7, +21}, as indices into
# the 52-entry active band.
STANDARD_PILOT_IDX = np.array([5, 19, 32, 46])

# Staggered sparse layout: 4 pilots spaced 13 apart, sliding one
# subcarrier per symbol, so any 13 consecutive symbols observe the whole
# active band.  Used by the frame-by-frame interpolators (2D LMMSE, RBF),
# whose sparse pilot indices differ between symbols.
STAGGER_PERIOD = 13


def staggered_pilot_idx(col: int) -> np.ndarray:
    return col % STAGGER_PERIOD + STAGGER_PERIOD * np.arange(K_PILOT)


def lp_pilot_indices(n_pilots: int = 12) -> np.ndarray:
    """Equally spaced pilot positions within the active band: floor(n*K_on/L)."""
    if not 1 <= n_pilots <= K_ON:
        raise ValueError(f"LP pilot count {n_pilots} outside 1..{K_ON}")
    return np.floor(np.arange(n_pilots) * K_ON / n_pilots).astype(int)


@dataclass(frozen=True)
class FrameSpec:
    """Frame layout parameters.

    ``n_pilot_syms == 0`` selects the standard 802.11p layout;
    1..3 select the modified structures with the given allocation scheme.
    """

    n_symbols: int = 100          # I, data-region OFDM symbols per frame
    n_pilot_syms: int = 0         # P, inserted pilot symbols
    scheme: str = "FP"            # FP | LP (ignored for the standard layout)
    n_lp_pilots: int = 12         # L, pilots per LP pilot symbol
    mod_order: int = 4            # M
    code_rate: float = 1.0        # rho, enters only the data-rate formula
    pilot_layout: str = "fixed"   # fixed | staggered in-symbol pilots (standard layout)

    def __post_init__(self):
        if self.n_symbols < 1:
            raise ValueError("frame must contain at least one symbol")
        if self.n_pilot_syms not in (0, 1, 2, 3):
            raise ValueError(f"pilot symbol count {self.n_pilot_syms} outside 0..3")
        if self.scheme not in ("FP", "LP"):
            raise ValueError(f"unknown pilot allocation scheme {self.scheme!r}")
        if self.pilot_layout not in ("fixed", "staggered"):
            raise ValueError(f"unknown pilot layout {self.pilot_layout!r}")
        if self.pilot_layout == "staggered" and self.n_pilot_syms:
            raise ValueError("the staggered sparse layout applies to the standard frame")
        if self.n_pilot_syms >= self.n_symbols:
            raise ValueError("pilot symbols must leave room for data symbols")
        modulation.bits_per_symbol(self.mod_order)  # validates M
        if self.scheme == "LP":
            lp_pilot_indices(self.n_lp_pilots)
        if not 0.0 < self.code_rate <= 1.0:
            raise ValueError("code rate must be in (0, 1]")

    @property
    def n_data_syms(self) -> int:
        """I_d = I - P."""
        return self.n_symbols - self.n_pilot_syms

    @property
    def subframe_sizes(self) -> tuple[int, ...]:
        """Symbols per subframe (pilot symbol last in each), larger subframes first."""
        p = self.n_pilot_syms
        if p == 0:
            return (self.n_symbols,)
        base, extra = divmod(self.n_symbols, p)
        return tuple(base + (1 if i < extra else 0) for i in range(p))

    @property
    def pilot_symbol_cols(self) -> tuple[int, ...]:
        """0-based columns of the inserted pilot symbols (empty for standard)."""
        if self.n_pilot_syms == 0:
            return ()
        return tuple(np.cumsum(self.subframe_sizes) - 1)

    @property
    def subframe_data_counts(self) -> tuple[int, ...]:
        """I_f per subframe: data symbols between consecutive anchors."""
        return tuple(s - 1 for s in self.subframe_sizes) if self.n_pilot_syms else ()

    def pilot_subcarrier_idx(self, col: int) -> np.ndarray:
        """Pilot positions within the active band for symbol column ``col``."""
        if self.n_pilot_syms == 0:
            if self.pilot_layout == "staggered":
                return staggered_pilot_idx(col)
            return STANDARD_PILOT_IDX
        if col in self.pilot_symbol_cols:
            if self.scheme == "FP":
                return np.arange(K_ON)
            return lp_pilot_indices(self.n_lp_pilots)
        return np.array([], dtype=int)

    def data_subcarrier_idx(self, col: int) -> np.ndarray:
        mask = np.ones(K_ON, dtype=bool)
        mask[self.pilot_subcarrier_idx(col)] = False
        return np.nonzero(mask)[0]

    @property
    def data_subcarriers_per_frame(self) -> int:
        """K_DF: 48*I (standard), 52*I_d (FP), 52*I_d + (52-L)*P (LP)."""
        if self.n_pilot_syms == 0:
            return K_DATA * self.n_symbols
        k_df = K_ON * self.n_data_syms
        if self.scheme == "LP":
            k_df += (K_ON - self.n_lp_pilots) * self.n_pilot_syms
        return k_df

    @property
    def bits_per_frame(self) -> int:
        return self.data_subcarriers_per_frame * modulation.bits_per_symbol(self.mod_order)


@dataclass
class FrameGrid:
    """A transmitted (or received) frequency-domain frame.

    ``preambles`` holds the two LTS symbols, ``symbols`` the K_on x I
    data-region grid.  ``payload_bits`` backs the data cells in
    column-major cell order (symbol by symbol, ascending subcarrier).
    """

    spec: FrameSpec
    preambles: np.ndarray            # (2, K_on) complex
    symbols: np.ndarray              # (K_on, I) complex
    payload_bits: np.ndarray = field(repr=False)

    @property
    def pilot_symbol_cols(self) -> tuple[int, ...]:
        return self.spec.pilot_symbol_cols

    def data_cell_mask(self) -> np.ndarray:
        """Boolean (K_on, I) mask of the cells carrying payload."""
        mask = np.zeros((K_ON, self.spec.n_symbols), dtype=bool)
        for col in range(self.spec.n_symbols):
            mask[self.spec.data_subcarrier_idx(col), col] = True
        return mask


def build_frame(spec: FrameSpec, bits: np.ndarray | None = None,
                rng: np.random.Generator | int | None = None) -> FrameGrid:
    """Populate a frame: LTS preambles, pilot cells from the pilot
    sequence, data cells from ``bits`` (drawn from ``rng`` when omitted).
    """
    if bits is None:
        gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
        bits = gen.integers(0, 2, size=spec.bits_per_frame)
    bits = np.asarray(bits, dtype=np.int64).ravel()
    if bits.size != spec.bits_per_frame:
        raise ValueError(
            f"expected {spec.bits_per_frame} payload bits for this layout, got {bits.size}")

    data_syms = modulation.map_bits(bits, spec.mod_order)
    grid = np.zeros((K_ON, spec.n_symbols), dtype=complex)
    pos = 0
    for col in range(spec.n_symbols):
        p_idx = spec.pilot_subcarrier_idx(col)
        d_idx = spec.data_subcarrier_idx(col)
        grid[p_idx, col] = LTS_SEQUENCE[p_idx]
        grid[d_idx, col] = data_syms[pos:pos + d_idx.size]
        pos += d_idx.size
    assert pos == data_syms.size

    preambles = np.tile(LTS_SEQUENCE.astype(complex), (2, 1))
    return FrameGrid(spec=spec, preambles=preambles, symbols=grid, payload_bits=bits)


def tdr(spec: FrameSpec) -> tuple[float, float]:
    """Transmission data rate in bits/s and the gain (%) over the
    standard layout at equal M, rho and I.
    """
    def rate(k_df: int) -> float:
        return (k_df * modulation.bits_per_symbol(spec.mod_order) * spec.code_rate
                / (SYMBOL_DURATION * spec.n_symbols))

    standard = FrameSpec(n_symbols=spec.n_symbols, n_pilot_syms=0,
                         mod_order=spec.mod_order, code_rate=spec.code_rate)
    r = rate(spec.data_subcarriers_per_frame)
    r0 = rate(standard.data_subcarriers_per_frame)
    return r, (r / r0 - 1.0) * 100.0


def buffering_time(spec: FrameSpec) -> float:
    """Buffering time phi in microseconds: the wait before estimation can
    start, i.e. one subframe (ceil(I/P) symbols) for P >= 2, else the
    whole frame.
    """
    if spec.n_pilot_syms >= 2:
        n = math.ceil(spec.n_symbols / spec.n_pilot_syms)
    else:
        n = spec.n_symbols
    return SYMBOL_DURATION_US * n
