from __future__ import annotations

import math

import numpy as np
import pytest

from fracsobolev.errors import DomainTooSmallError, GridMismatchError, SymmetryViolationError, UsageError
from fracsobolev.grid import (
    GridSpec,
    SampledFunction,
    Spectrum,
    bump,
    dft,
    gaussian,
    hermite_gaussian,
    idft,
    inner_product,
    l2_norm,
    power_plus,
    sample,
    sample_derivative,
    sine_gaussian,
    sobolev_norm,
    spectral_inner_product,
    spectrum_l2_norm,
    translate,
    window_mask,
    windowed_rel_error,
    zeros,
)


class TestGridSpec:
    def test_defaults(self, grid):
        assert grid.half_width == 16.0
        assert grid.points == 4096
        assert grid.spacing * grid.points == 2 * grid.half_width
        assert grid.x[0] == -16.0
        assert grid.x[grid.points // 2] == 0.0
        assert grid.xi[0] == -grid.points / (4 * grid.half_width)
        assert grid.xi[grid.points // 2] == 0.0

    @pytest.mark.parametrize(("L", "N"), [(0.0, 64), (-1.0, 64), (1.0, 7), (1.0, 6), (1.0, 4096.5)])
    def test_invalid(self, L, N):
        with pytest.raises(UsageError):
            GridSpec(L, N)

    def test_dilated(self, grid):
        g2 = grid.dilated(2.0)
        assert g2.points == grid.points
        np.testing.assert_allclose(g2.x, 2.0 * grid.x)


class TestSample:
    def test_gaussian_center(self, grid):
        u = sample(gaussian(), grid)
        assert u.values[grid.points // 2] == 1.0

    def test_bump_support(self, grid):
        u = sample(bump(center=0.0, radius=1.0), grid)
        assert np.all(u.values[np.abs(grid.x) >= 1] == 0.0)
        assert np.all(u.values[np.abs(grid.x) < 1] > 0.0)
        assert u.values[grid.points // 2] == pytest.approx(math.exp(-1))

    def test_power_plus(self, grid):
        u = sample(power_plus(1.0), grid)
        np.testing.assert_array_equal(u.values, np.maximum(0.0, grid.x))

    def test_heaviside_midpoint(self, grid):
        u = sample(power_plus(0.0), grid)
        assert u.values[grid.points // 2] == 0.5

    def test_domain_too_small(self):
        g = GridSpec(2.0, 256)
        with pytest.raises(DomainTooSmallError):
            sample(bump(center=1.5, radius=1.0), g)
        with pytest.raises(DomainTooSmallError):
            sample(gaussian(scale=1.0), g)

    def test_values_are_read_only(self, grid):
        u = sample(gaussian(), grid)
        with pytest.raises(ValueError):
            u.values[0] = 1.0

    def test_nonfinite_rejected(self, grid):
        with pytest.raises(UsageError):
            SampledFunction(grid, np.full(grid.points, np.nan))
        with pytest.raises(UsageError):
            SampledFunction(grid, np.zeros(grid.points - 1))

    @pytest.mark.parametrize(
        "spec",
        [gaussian(0.3, 0.8), sine_gaussian(1.5, 0.2), hermite_gaussian(3), bump(0.5, 1.5)],
    )
    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_analytic_derivative_matches_finite_difference(self, spec, n):
        x = np.linspace(-2.5, 2.5, 41)
        h = 1e-3
        # central difference of the (n-1)-th analytic derivative
        fd = (spec.derivative(x + h, n - 1) - spec.derivative(x - h, n - 1)) / (2 * h)
        scale = np.max(np.abs(spec.derivative(x, n)))
        np.testing.assert_allclose(spec.derivative(x, n), fd, atol=1e-4 * scale)

    def test_dilated_and_translated_specs(self):
        x = np.linspace(-3, 3, 31)
        for spec in (gaussian(0.5, 0.9), sine_gaussian(1.0, 0.1), bump(0.2, 1.0), hermite_gaussian(2)):
            np.testing.assert_allclose(spec.dilated(2.0)(x), spec(2.0 * x), atol=1e-15)
            np.testing.assert_allclose(spec.translated(0.7)(x), spec(x - 0.7), atol=1e-15)
            np.testing.assert_allclose(spec.reflected()(x), spec(-x), atol=1e-15)


class TestTransform:
    def test_gaussian_self_dual(self, grid):
        c = dft(sample(gaussian(), grid)).coeffs
        assert np.max(np.abs(c - np.exp(-np.pi * grid.xi**2))) <= 1e-8

    def test_constant_concentrates_at_zero(self, grid):
        c = dft(SampledFunction(grid, np.ones(grid.points))).coeffs
        k0 = grid.points // 2
        assert c[k0] == pytest.approx(2 * grid.half_width)
        assert np.max(np.abs(np.delete(c, k0))) <= 1e-12

    def test_shift_theorem(self, grid):
        h = 1.25
        c = dft(sample(gaussian(center=h), grid)).coeffs
        expect = np.exp(-2j * np.pi * grid.xi * h) * np.exp(-np.pi * grid.xi**2)
        assert np.max(np.abs(c - expect)) <= 1e-8

    def test_matches_definition_directly(self):
        g = GridSpec(2.0, 32)
        u = SampledFunction(g, np.random.default_rng(1).normal(size=32))
        direct = g.spacing * np.exp(-2j * np.pi * np.outer(g.xi, g.x)) @ u.values
        np.testing.assert_allclose(dft(u).coeffs, direct, atol=1e-12)

    def test_roundtrip_random(self, grid, rng):
        u = SampledFunction(grid, rng.normal(size=grid.points))
        back = idft(dft(u))
        assert np.linalg.norm(back.values - u.values) / np.linalg.norm(u.values) <= 1e-12

    def test_zero_spectrum(self, grid):
        assert np.all(idft(Spectrum(grid, np.zeros(grid.points, complex))).values == 0.0)

    def test_inverse_of_gaussian(self, grid):
        xi = grid.xi
        u = idft(Spectrum(grid, np.exp(-np.pi * xi**2).astype(complex)))
        assert np.max(np.abs(u.values - np.exp(-np.pi * grid.x**2))) <= 1e-8

    def test_conjugate_symmetry(self, grid, rng):
        spec = dft(SampledFunction(grid, rng.normal(size=grid.points)))
        assert spec.conjugate_symmetry_defect() <= 1e-12

    def test_symmetry_violation(self, grid):
        c = np.zeros(grid.points, complex)
        c[grid.points // 2 + 3] = 1.0  # one-sided line: not a real function
        with pytest.raises(SymmetryViolationError):
            idft(Spectrum(grid, c))

    def test_small_residue_warns_and_is_dropped(self, grid):
        c = dft(sample(gaussian(), grid)).coeffs.copy()
        c[grid.points // 2 + 1] += 1e-7j  # residue ~ 1e-7 / (2L), inside the warning band
        with pytest.warns(RuntimeWarning, match="imaginary residue"):
            u = idft(Spectrum(grid, c))
        assert u.values.dtype == np.float64


class TestNorms:
    def test_gaussian_inner_product(self, grid, oracle):
        g = sample(gaussian(), grid)
        assert inner_product(g, g) == pytest.approx(oracle["gaussian_l2_sq"], rel=1e-10)

    def test_zero_and_disjoint(self, grid):
        g = sample(gaussian(), grid)
        assert inner_product(g, zeros(grid)) == 0.0
        far = sample(gaussian(center=10.0), GridSpec(32.0, 8192))
        near = sample(gaussian(center=-10.0), GridSpec(32.0, 8192))
        assert abs(inner_product(near, far)) <= 1e-14

    def test_grid_mismatch(self, grid):
        with pytest.raises(GridMismatchError):
            inner_product(sample(gaussian(), grid), sample(gaussian(), GridSpec(16.0, 2048)))

    def test_plancherel_parseval(self, grid, rng):
        u = SampledFunction(grid, rng.normal(size=grid.points))
        v = sample(sine_gaussian(1.0), grid)
        assert abs(l2_norm(u) - spectrum_l2_norm(dft(u))) / l2_norm(u) <= 1e-10
        gap = abs(inner_product(u, v) - spectral_inner_product(dft(u), dft(v)))
        assert gap <= 1e-10 * l2_norm(u) * l2_norm(v)

    def test_sobolev_norm_gaussian(self, grid, oracle):
        u = sample(gaussian(), grid)
        n0 = sobolev_norm(u, 0)
        assert n0.seminorm**2 == pytest.approx(oracle["gaussian_l2_sq"], rel=1e-10)
        assert n0.norm**2 == pytest.approx(2 * oracle["gaussian_l2_sq"], rel=1e-10)
        n1 = sobolev_norm(u, 1)
        assert n1.seminorm**2 == pytest.approx(oracle["gaussian_h1_seminorm_sq"], rel=1e-8)
        assert n1.seminorm**2 == pytest.approx(math.pi / math.sqrt(2), rel=1e-8)

    def test_norm_dominates_l2(self, grid):
        u = sample(bump(), grid)
        for s in (0.0, 0.5, 1.0, 2.4):
            assert sobolev_norm(u, s).norm >= l2_norm(u)

    def test_monotone_in_s_for_high_frequency_input(self, grid):
        u = sample(sine_gaussian(frequency=3.0, scale=2.0), grid)
        semis = [sobolev_norm(u, s).seminorm for s in (0.0, 0.5, 1.0, 1.5, 2.0)]
        assert semis == sorted(semis)


class TestHelpers:
    def test_translate(self, grid):
        u = sample(gaussian(), grid)
        np.testing.assert_allclose(translate(u, 1.0).values, sample(gaussian(center=1.0), grid).values, atol=1e-15)
        with pytest.raises(UsageError):
            translate(u, grid.spacing / 2)

    def test_window(self, grid):
        m = window_mask(grid, -1.0, 1.0)
        assert grid.x[m].min() >= -1.0 and grid.x[m].max() <= 1.0
        assert windowed_rel_error(np.ones(4), np.ones(4)) == 0.0

    def test_arithmetic(self, grid):
        u = sample(gaussian(), grid)
        v = sample(bump(), grid)
        np.testing.assert_array_equal((u + v).values, u.values + v.values)
        np.testing.assert_array_equal((u - v).values, u.values - v.values)
        np.testing.assert_array_equal((2.0 * u).values, 2.0 * u.values)
        np.testing.assert_array_equal((-u).values, -u.values)

    def test_sample_derivative_gaussian(self, grid):
        d = sample_derivative(gaussian(), grid, 1).values
        np.testing.assert_allclose(d, -2 * np.pi * grid.x * np.exp(-np.pi * grid.x**2), atol=1e-14)
