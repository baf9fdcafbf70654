"""Gray-mapped QPSK / 16-QAM symbol mapping with unit average energy.

Constellations follow the 802.11 convention: one Gray-coded amplitude
ladder per axis, scaled so that E[|x|^2] = 1.
"""

import numpy as np

# Per-axis Gray ladders, indexed by the axis bit pattern (MSB first).
# QPSK: bit 0 -> +1, bit 1 -> -1.  16-QAM: 00 -> -3, 01 -> -1, 11 -> +1,
# 10 -> +3, normalized by sqrt(10).
_QPSK_AXIS = np.array([1.0, -1.0]) / np.sqrt(2.0)
_QAM16_AXIS = np.array([-3.0, -1.0, 3.0, 1.0]) / np.sqrt(10.0)

SUPPORTED_ORDERS = (4, 16)


def constellation(m: int) -> np.ndarray:
    """Return the M points in bit-pattern order (index = integer of the bits)."""
    if m == 4:
        i = _QPSK_AXIS[np.arange(4) >> 1]
        q = _QPSK_AXIS[np.arange(4) & 1]
    elif m == 16:
        i = _QAM16_AXIS[np.arange(16) >> 2]
        q = _QAM16_AXIS[np.arange(16) & 3]
    else:
        raise ValueError(f"unsupported modulation order {m}; expected one of {SUPPORTED_ORDERS}")
    return i + 1j * q


def bits_per_symbol(m: int) -> int:
    if m not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported modulation order {m}; expected one of {SUPPORTED_ORDERS}")
    return int(np.log2(m))


def map_bits(bits: np.ndarray, m: int) -> np.ndarray:
    """Map a flat bit vector to complex constellation symbols.

    ``len(bits)`` must be a multiple of log2(M).  QPSK bits 00 map to
    (1+1j)/sqrt(2).
    """
    k = bits_per_symbol(m)
    bits = np.asarray(bits, dtype=np.int64)
    if bits.ndim != 1 or bits.size % k:
        raise ValueError(f"bit vector length {bits.size} is not a multiple of {k}")
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValueError("bits must be 0/1")
    idx = bits.reshape(-1, k) @ (1 << np.arange(k - 1, -1, -1))
    return constellation(m)[idx]


def demap_hard(symbols: np.ndarray, m: int) -> tuple[np.ndarray, np.ndarray]:
    """Hard-decide symbols to the nearest constellation point.

    Returns ``(points, bits)`` where ``points`` are the decided
    constellation values and ``bits`` is the flat decided bit vector.
    Ties go to the lowest constellation index (stable argmin).
    """
    pts = constellation(m)
    symbols = np.asarray(symbols)
    d2 = np.abs(symbols.reshape(-1, 1) - pts.reshape(1, -1)) ** 2
    idx = np.argmin(d2, axis=1)
    k = bits_per_symbol(m)
    bits = (idx.reshape(-1, 1) >> np.arange(k - 1, -1, -1)) & 1
    return pts[idx].reshape(symbols.shape), bits.reshape(-1).astype(np.int64)


def hard_decision(symbols: np.ndarray, m: int) -> np.ndarray:
    """Nearest constellation point only (no bit demapping)."""
    return demap_hard(symbols, m)[0]
