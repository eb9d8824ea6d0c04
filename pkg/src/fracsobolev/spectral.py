r"""Fourier-multiplier fractional derivatives and integrals.

The symbol of the left derivative :math:`D^\mu` is :math:`(2\pi i\xi)^\mu`
and of the right derivative :math:`D^{\mu*}` is :math:`(-2\pi i\xi)^\mu`, with
the principal branch

.. math::

    (\pm 2\pi i \xi)^\mu = |2\pi\xi|^\mu e^{\pm i\mu\pi\,\mathrm{sign}(\xi)/2}.
"""

from __future__ import annotations

import math

import numpy as np

from fracsobolev.errors import InvalidOrderError, NonzeroMeanError
from fracsobolev.grid import GridSpec, SampledFunction, Spectrum, dft, idft, l2_norm
from fracsobolev.orders import Side

# exact powers of i for integer orders
_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

#: Relative size of the zero-frequency bin tolerated by spectral integration.
ZERO_MEAN_TOL = 1e-8


def _unit_phase(mu: float, sign: np.ndarray) -> np.ndarray:
    if float(mu).is_integer():
        m = int(mu) % 4
        up, down = _I_POWERS[m], _I_POWERS[(-m) % 4]
        return np.where(sign > 0, up, np.where(sign < 0, down, 1.0 + 0j))
    return np.exp(1j * mu * math.pi * sign / 2)


def symbol(xi: float | np.ndarray, mu: float, side: Side = Side.LEFT) -> complex | np.ndarray:
    r"""Principal-branch :math:`(\pm 2\pi i\xi)^\mu`; ``+`` for the left side.

    The value is ``1`` for ``mu == 0`` and ``0`` at ``xi == 0`` otherwise.
    """
    if mu < 0:
        raise InvalidOrderError(f"symbol order must be >= 0, got {mu}")
    side = Side.parse(side)
    xi_arr = np.asarray(xi, dtype=np.float64)
    if mu == 0:
        out = np.ones(xi_arr.shape, dtype=np.complex128)
    else:
        sign = np.sign(xi_arr) * (1 if side is Side.LEFT else -1)
        out = np.abs(2 * np.pi * xi_arr) ** mu * _unit_phase(mu, sign)
    return complex(out) if out.ndim == 0 else out


def hermitian_on_grid(grid: GridSpec, m: np.ndarray) -> np.ndarray:
    """Multiplier array with the unpaired ``k = -N/2`` bin replaced by its real part.

    Any multiplier with ``m(-xi) = conj(m(xi))`` then maps real samples to
    real samples exactly.
    """
    m = np.array(m, dtype=np.complex128, copy=True)
    m[grid.nyquist] = m[grid.nyquist].real
    return m


def grid_symbol(grid: GridSpec, mu: float, side: Side = Side.LEFT) -> np.ndarray:
    return hermitian_on_grid(grid, symbol(grid.xi, mu, side))


def apply_multiplier(u: SampledFunction, m: np.ndarray) -> SampledFunction:
    """``idft(m * dft(u))`` for a multiplier array in bin order."""
    m = hermitian_on_grid(u.grid, m)
    return idft(Spectrum(u.grid, m * dft(u).coeffs))


def spectral_rl_derivative(
    u: SampledFunction, mu: float, side: Side = Side.LEFT
) -> SampledFunction:
    """Left or right Riemann-Liouville derivative of order ``mu`` via its symbol."""
    if mu < 0:
        raise InvalidOrderError(f"derivative order must be >= 0, got {mu}")
    if mu == 0:
        return u
    return apply_multiplier(u, grid_symbol(u.grid, mu, side))


def spectral_rl_integral(
    u: SampledFunction, sigma: float, side: Side = Side.LEFT
) -> SampledFunction:
    """Fractional integral of a zero-mean function by division by the symbol.

    The ``xi = 0`` bin of the result is set to zero, so the output is
    determined up to an additive constant when ``sigma`` is an integer.
    """
    if not sigma > 0:
        raise InvalidOrderError(f"integral order must be > 0, got {sigma}")
    c = dft(u).coeffs
    zero = u.grid.points // 2
    norm = l2_norm(u)
    if abs(c[zero]) > ZERO_MEAN_TOL * norm:
        raise NonzeroMeanError(
            f"zero-frequency coefficient {abs(c[zero]):.3e} exceeds "
            f"{ZERO_MEAN_TOL:g} * ||u|| = {ZERO_MEAN_TOL * norm:.3e}"
        )
    m = grid_symbol(u.grid, sigma, side)
    inv = np.zeros_like(m)
    nz = m != 0
    inv[nz] = 1.0 / m[nz]
    return idft(Spectrum(u.grid, inv * c))


def top_octave_fraction(grid: GridSpec, energy: np.ndarray) -> float:
    """Share of ``energy`` (per bin) carried by ``|xi| >= xi_max / 2``."""
    total = float(np.sum(energy))
    if total == 0:
        return 0.0
    top = np.abs(grid.k) >= grid.points // 4
    return float(np.sum(energy[top])) / total
