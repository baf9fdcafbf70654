"""Constellation mapping tests."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wice import modulation


def test_qpsk_zero_bits_map_to_first_quadrant():
    sym = modulation.map_bits(np.array([0, 0]), 4)
    assert sym[0] == pytest.approx((1 + 1j) / np.sqrt(2))


@pytest.mark.parametrize("m", [4, 16])
def test_unit_average_energy(m):
    pts = modulation.constellation(m)
    assert np.mean(np.abs(pts) ** 2) == pytest.approx(1.0)


def test_demap_nearest_point():
    noisy = np.array([(0.9 + 0.9j) / np.sqrt(2)])
    pts, bits = modulation.demap_hard(noisy, 4)
    assert pts[0] == pytest.approx((1 + 1j) / np.sqrt(2))
    assert bits.tolist() == [0, 0]


@pytest.mark.parametrize("m", [4, 16])
@given(data=st.data())
@settings(max_examples=25, deadline=None)
def test_map_demap_roundtrip(m, data):
    k = modulation.bits_per_symbol(m)
    n = data.draw(st.integers(min_value=1, max_value=64))
    bits = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n * k, max_size=n * k)))
    syms = modulation.map_bits(bits, m)
    _, decoded = modulation.demap_hard(syms, m)
    assert np.array_equal(decoded, bits)


@pytest.mark.parametrize("m", [4, 16])
def test_gray_neighbours_differ_by_one_bit(m):
    # nearest-neighbour constellation points differ in exactly one bit
    pts = modulation.constellation(m)
    k = modulation.bits_per_symbol(m)
    d = np.abs(pts.reshape(-1, 1) - pts.reshape(1, -1))
    dmin = d[d > 1e-12].min()
    for i in range(m):
        for j in range(m):
            if abs(d[i, j] - dmin) < 1e-12:
                assert bin(i ^ j).count("1") == 1


def test_unsupported_order_raises():
    with pytest.raises(ValueError):
        modulation.map_bits(np.array([0, 0, 0]), 8)
    with pytest.raises(ValueError):
        modulation.demap_hard(np.array([1.0 + 0j]), 64)


def test_bit_length_must_match_order():
    with pytest.raises(ValueError):
        modulation.map_bits(np.array([0, 1, 0]), 4)
