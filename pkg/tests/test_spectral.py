from __future__ import annotations

import math
import warnings

import numpy as np
import pytest

from fracsobolev.errors import NonzeroMeanError
from fracsobolev.grid import (
    SampledFunction,
    bump,
    dft,
    gaussian,
    sample,
    sample_derivative,
    sine_gaussian,
    translate,
    window_mask,
    windowed_rel_error,
)
from fracsobolev.orders import Side
from fracsobolev.quadrature import image_tail, rl_derivative, rl_integral
from fracsobolev.spectral import (
    grid_symbol,
    spectral_rl_derivative,
    spectral_rl_integral,
    symbol,
    top_octave_fraction,
)

from conftest import rel_l2


class TestSymbol:
    def test_classical(self):
        assert symbol(1.0, 1.0, Side.LEFT) == pytest.approx(2j * math.pi, abs=1e-15)
        assert symbol(1.0, 1.0, Side.RIGHT) == pytest.approx(-2j * math.pi, abs=1e-15)
        assert symbol(-1.0, 2.0, Side.LEFT) == pytest.approx(-4 * math.pi**2, abs=1e-12)

    def test_half_order_value(self):
        z = symbol(1.0, 0.5, Side.LEFT)
        assert z.real == pytest.approx(1.7724539, abs=1e-7)
        assert z.imag == pytest.approx(1.7724539, abs=1e-7)
        assert abs(z) == pytest.approx(math.sqrt(2 * math.pi), rel=1e-15)

    def test_zero_frequency_and_zero_order(self):
        assert symbol(0.0, 0.7, Side.LEFT) == 0
        assert symbol(0.0, 0.7, Side.RIGHT) == 0
        assert symbol(0.0, 0.0, Side.LEFT) == 1
        assert symbol(3.0, 0.0, Side.RIGHT) == 1

    def test_modulus_and_conjugation(self, grid):
        xi = grid.xi
        for mu in (0.3, 1.0, 2.4):
            left = symbol(xi, mu, Side.LEFT)
            np.testing.assert_allclose(np.abs(left), np.abs(2 * np.pi * xi) ** mu, rtol=1e-14)
            np.testing.assert_allclose(symbol(-xi, mu, Side.LEFT), np.conj(left), rtol=1e-14)

    def test_grid_symbol_is_hermitian(self, grid):
        m = grid_symbol(grid, 0.5, Side.LEFT)
        assert m[0].imag == 0.0
        np.testing.assert_array_equal(m[1:][::-1], np.conj(m[1:]))


class TestDerivative:
    def test_second_derivative_gaussian(self, grid):
        u = sample(gaussian(), grid)
        x = grid.x
        exact = (4 * np.pi**2 * x**2 - 2 * np.pi) * np.exp(-np.pi * x**2)
        assert rel_l2(spectral_rl_derivative(u, 2), exact) <= 1e-8

    def test_zero_order_is_identity(self, grid):
        u = sample(bump(), grid)
        for side in Side:
            assert spectral_rl_derivative(u, 0, side) is u

    def test_matches_quadrature_on_bump(self, grid):
        spec = bump()
        u = sample(spec, grid)
        win = window_mask(grid, -5.0, 5.0)
        for side in Side:
            quad = rl_derivative(u, 0.5, side, sample_derivative(spec, grid, 1)) + image_tail(u, 0.5, side)
            got = spectral_rl_derivative(u, 0.5, side)
            assert windowed_rel_error(got.values[win], quad.values[win]) <= 5e-3

    def test_periodic_tail_matches_mpmath(self, grid, oracle):
        # the spectral operator minus the periodic-image far field is the whole-line derivative
        u = sample(gaussian(), grid)
        whole = spectral_rl_derivative(u, 0.5) - image_tail(u, 0.5)
        for x, val in oracle["gaussian_left_derivative_0_5"].items():
            assert whole.values[grid.index_of(float(x))] == pytest.approx(val, abs=1e-12)

    def test_translation(self, grid):
        u = sample(gaussian(), grid)
        lhs = spectral_rl_derivative(sample(gaussian(center=1.0), grid), 0.5)
        rhs = translate(spectral_rl_derivative(u, 0.5), 1.0)
        assert np.max(np.abs(lhs.values - rhs.values)) <= 1e-10

    def test_dilation(self, grid):
        spec = gaussian()
        for kappa in (0.5, 2.0):
            lhs = spectral_rl_derivative(sample(spec, grid.dilated(kappa)), 0.7)
            rhs = kappa**-0.7 * spectral_rl_derivative(sample(spec.dilated(kappa), grid), 0.7).values
            assert rel_l2(lhs, rhs) <= 1e-8

    def test_real_output_no_warning(self, grid):
        u = sample(gaussian(center=0.3), grid)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for mu in (0.3, 1.0, 1.5, 3.0):
                spectral_rl_derivative(u, mu, Side.RIGHT)


class TestIntegral:
    def test_recovers_bump_from_derivative(self, grid):
        spec = bump()
        du = sample_derivative(spec, grid, 1)
        back = spectral_rl_integral(du, 1.0)
        # the integral is fixed up to a constant; the zero bin pins it at mean zero
        u = sample(spec, grid).values
        assert rel_l2(back, u - u.mean()) <= 1e-8

    def test_inverts_derivative(self, grid):
        u = sample(sine_gaussian(1.0), grid)
        back = spectral_rl_integral(spectral_rl_derivative(u, 0.5), 0.5)
        assert rel_l2(back, u) <= 1e-8

    def test_matches_quadrature(self, grid):
        spec = sine_gaussian(frequency=0.5)
        u = sample(spec, grid)
        win = window_mask(grid, -4.0, 6.0)
        for side in Side:
            quad = rl_integral(u, 0.5, side) + image_tail(u, -0.5, side)
            got = spectral_rl_integral(u, 0.5, side)
            assert windowed_rel_error(got.values[win], quad.values[win]) <= 1e-2

    def test_nonzero_mean(self, grid):
        with pytest.raises(NonzeroMeanError):
            spectral_rl_integral(sample(gaussian(), grid), 0.5)


def test_top_octave_fraction(grid, rng):
    white = SampledFunction(grid, rng.normal(size=grid.points))
    flat = np.abs(dft(white).coeffs) ** 2
    assert 0.4 < top_octave_fraction(grid, flat) < 0.6
    assert top_octave_fraction(grid, np.zeros(grid.points)) == 0.0
