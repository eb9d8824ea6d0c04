from __future__ import annotations

import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fracsobolev.grid import GridSpec, SampledFunction, dft, gaussian, idft, l2_norm, sample, spectrum_l2_norm
from fracsobolev.io import sampled_from_csv, sampled_to_csv
from fracsobolev.orders import OrderDecomposition, Side
from fracsobolev.quadrature import rl_integral
from fracsobolev.sobolev import chi, factor_symbol, forward_map, inverse_map
from fracsobolev.spectral import symbol

GRID = GridSpec(8.0, 256)

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)
orders = st.floats(0.0, 4.0, allow_nan=False)
sides = st.sampled_from(list(Side))
values = arrays(np.float64, GRID.points, elements=finite)


@given(values)
def test_plancherel(v):
    u = SampledFunction(GRID, v)
    norm = l2_norm(u)
    assert abs(norm - spectrum_l2_norm(dft(u))) <= 1e-10 * norm + 1e-300


@given(values)
def test_dft_inverse(v):
    u = SampledFunction(GRID, v)
    back = idft(dft(u)).values
    assert np.max(np.abs(back - v), initial=0) <= 1e-12 * max(np.max(np.abs(v)), 1e-300)


@given(orders, orders, sides, st.floats(-50.0, 50.0, allow_nan=False))
def test_symbol_group_law(a, b, side, xi):
    lhs = symbol(xi, a, side) * symbol(xi, b, side)
    rhs = symbol(xi, a + b, side)
    assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(rhs))


@given(st.floats(0.0, 40.0, allow_nan=False))
def test_chi_cosine(s):
    assert chi(s) * math.cos(s * math.pi / 2) >= -1e-12


@given(orders, sides, st.floats(-100.0, 100.0, allow_nan=False))
def test_factor_lower_bound(s, side, xi):
    bound = 1 + abs(2 * math.pi * xi) ** (2 * s)
    assert abs(factor_symbol(xi, s, side)) ** 2 >= bound * (1 - 1e-9)


@given(st.lists(st.tuples(st.floats(0.0, 3.0, allow_nan=False), sides), max_size=4))
def test_decomposition_format_roundtrip(factors):
    d = OrderDecomposition(tuple(factors))
    back = OrderDecomposition.parse(d.format())
    assert back.factors == d.factors


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.floats(0.0, 2.0, allow_nan=False), sides), min_size=1, max_size=3),
    st.floats(-2.0, 2.0),
    st.floats(0.6, 1.4),
)
def test_map_roundtrip(factors, center, scale):
    v = sample(gaussian(center=center, scale=scale), GRID)
    d = OrderDecomposition(tuple(factors))
    back = inverse_map(forward_map(v, d), d)
    assert np.linalg.norm(back.values - v.values) <= 1e-10 * np.linalg.norm(v.values)


@settings(deadline=None)
@given(st.floats(0.05, 1.95), values, values, finite, finite)
def test_integral_linearity(sigma, a, b, alpha, beta):
    u, v = SampledFunction(GRID, a), SampledFunction(GRID, b)
    lhs = rl_integral(alpha * u + beta * v, sigma).values
    rhs = alpha * rl_integral(u, sigma).values + beta * rl_integral(v, sigma).values
    scale = (abs(alpha) * np.max(np.abs(a)) + abs(beta) * np.max(np.abs(b))) * np.max(np.abs(rl_integral(
        SampledFunction(GRID, np.ones(GRID.points)), sigma).values))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale + 1e-300


@given(arrays(np.float64, 8, elements=st.floats(allow_nan=False, allow_infinity=False)))
def test_csv_roundtrip(v):
    g = GridSpec(1.0, 8)
    back = sampled_from_csv(sampled_to_csv(SampledFunction(g, v)))
    np.testing.assert_array_equal(back.values, v)
