r"""Direct evaluation of Riemann-Liouville integrals and derivatives.

The left integral

.. math::

    D^{-\sigma} u(x) = \frac{1}{\Gamma(\sigma)}
        \int_{-L}^{x} (x - t)^{\sigma - 1} u(t) \,\mathrm{d}t

is discretized by product integration: on every cell ``u`` is replaced by its
linear interpolant and the kernel moments are integrated in closed form.
On a uniform grid this gives the Toeplitz weights

.. math::

    w_j = \frac{\Delta^\sigma}{\Gamma(\sigma + 2)} \Big(
        a_{j} u_0 + \sum_{m=1}^{j} c_{j - m} u_m \Big),
    \qquad c_0 = 1,\;
    c_k = (k+1)^{\sigma+1} - 2k^{\sigma+1} + (k-1)^{\sigma+1},

with end weight :math:`a_j = (j-1)^{\sigma+1} - (j-1-\sigma) j^\sigma`. The
right integral is the mirror image over ``[x, x_{N-1}]``.

These operators act on the whole line (no periodization) and serve as the
independent check of the Fourier-multiplier operators in
:mod:`fracsobolev.spectral`.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.special import gamma, poch, zeta

from fracsobolev.errors import InvalidOrderError, SmoothnessWarning
from fracsobolev.grid import GridSpec, SampledFunction, dft
from fracsobolev.orders import FractionalOrder, Side, as_order
from fracsobolev.spectral import grid_symbol, spectral_rl_derivative, top_octave_fraction

#: Top-octave energy share above which :func:`rl_derivative` warns.
SMOOTHNESS_TOL = 1e-6

# switch to the binomial series for the second difference beyond this index
_SERIES_FROM = 16
_SERIES_TERMS = 12

__all__ = [
    "FractionalOrder",
    "Side",
    "image_tail",
    "product_weights",
    "rl_derivative",
    "rl_integral",
]


def product_weights(sigma: float, size: int) -> np.ndarray:
    r"""Interior weights :math:`c_k`, ``k = 0 .. size - 1``.

    For large ``k`` the second difference of :math:`k^{\sigma+1}` is summed
    as the binomial series
    :math:`2\sum_{m \ge 1} \binom{\sigma+1}{2m} k^{\sigma+1-2m}`; the direct
    formula loses about ``log10(k^2)`` digits to cancellation.
    """
    p = sigma + 1.0
    k = np.arange(size, dtype=np.float64)
    c = np.empty(size)
    c[0] = 1.0
    head = k[1:_SERIES_FROM]
    c[1:_SERIES_FROM] = (head + 1) ** p - 2 * head**p + (head - 1) ** p
    if size > _SERIES_FROM:
        tail = k[_SERIES_FROM:]
        acc = np.zeros_like(tail)
        # generalized binomial coefficients C(p, 2m) built incrementally
        binom = 1.0
        for j in range(1, 2 * _SERIES_TERMS + 1):
            binom *= (p - j + 1) / j
            if j % 2 == 0:
                acc += binom * tail ** (p - j)
        c[_SERIES_FROM:] = 2 * acc
    return c[:size]


def _end_weights(sigma: float, size: int) -> np.ndarray:
    j = np.arange(size, dtype=np.float64)
    a = np.zeros(size)
    a[1:] = (j[1:] - 1) ** (sigma + 1) - (j[1:] - 1 - sigma) * j[1:] ** sigma
    return a


def _left_integral(values: np.ndarray, sigma: float, h: float) -> np.ndarray:
    n = values.size
    c = product_weights(sigma, n)
    w = np.convolve(values, c)[:n]
    w += (_end_weights(sigma, n) - c) * values[0]
    w[0] = 0.0
    return h**sigma / gamma(sigma + 2) * w


def rl_integral(
    u: SampledFunction, sigma: float, side: Side = Side.LEFT
) -> SampledFunction:
    """Left or right Riemann-Liouville integral of order ``sigma > 0``.

    ``sigma == 0`` is not an integral; callers who want the identity at zero
    order should special-case it.
    """
    if not (math.isfinite(sigma) and sigma > 0):
        raise InvalidOrderError(f"integral order must be > 0, got {sigma}")
    side = Side.parse(side)
    h = u.grid.spacing
    if side is Side.LEFT:
        out = _left_integral(u.values, sigma, h)
    else:
        out = _left_integral(u.values[::-1], sigma, h)[::-1]
    return u.with_values(out)


def rl_derivative(
    u: SampledFunction,
    mu: float | FractionalOrder,
    side: Side = Side.LEFT,
    analytic_derivs: SampledFunction | None = None,
) -> SampledFunction:
    r"""Riemann-Liouville derivative as :math:`D^{-\sigma}(u^{(n)})`.

    ``analytic_derivs`` are samples of :math:`u^{(n)}` with ``n = mu.n``;
    without them the ``n``-th derivative is taken spectrally and a
    :class:`SmoothnessWarning` is issued when that derivative carries more than
    :data:`SMOOTHNESS_TOL` of its energy in the top octave. The right
    derivative carries the sign :math:`(-1)^n`.

    For integer ``mu`` (``sigma == 1``) the outer integral is an exact
    antiderivative; without analytic samples the classical derivative of
    order ``mu`` is returned directly.
    """
    order = as_order(mu)
    if order.s <= 0:
        raise InvalidOrderError(f"derivative order must be > 0, got {order.s}")
    side = Side.parse(side)
    n, sigma = order.n, order.sigma

    if analytic_derivs is None:
        energy = np.abs(grid_symbol(u.grid, n) * dft(u).coeffs) ** 2
        frac = top_octave_fraction(u.grid, energy)
        if frac > SMOOTHNESS_TOL:
            warnings.warn(
                f"input not resolved: {frac:.2e} of the order-{n} derivative "
                "energy lies in the top octave",
                SmoothnessWarning,
                stacklevel=2,
            )
        if order.is_integer:
            return spectral_rl_derivative(u, order.s, side)
        un = spectral_rl_derivative(u, n, Side.LEFT)
    else:
        if analytic_derivs.grid != u.grid:
            raise InvalidOrderError("analytic derivative samples on a different grid")
        un = analytic_derivs

    w = rl_integral(un, sigma, side)
    return w if side is Side.LEFT or n % 2 == 0 else -w


def image_tail(
    u: SampledFunction, order: float, side: Side = Side.LEFT, terms: int = 8
) -> SampledFunction:
    r"""Far-field contribution of the periodic copies of ``u``.

    A Fourier-multiplier operator acts on the ``2L``-periodic extension of
    ``u``, while :func:`rl_integral` and :func:`rl_derivative` act on
    ``u`` alone. For a left operator of signed ``order`` (``mu`` for a
    derivative, ``-sigma`` for an integral) the copies ``u(t + 2Lk)``,
    ``k >= 1``, add

    .. math::

        \frac{1}{\Gamma(-q)} \sum_{m} \frac{(1+q)_m}{m!} M_m
            (2L)^{-1-q-m}\, \zeta\big(1+q+m,\, 1 + x/(2L)\big),

    where :math:`M_m = \int t^m u` and :math:`\zeta` is the Hurwitz zeta
    function. Terms whose image sum diverges must have vanishing moments
    (zero-mean input for integrals); they are skipped. The expansion assumes
    ``u`` is concentrated well inside ``[-L, L)``.
    """
    side = Side.parse(side)
    q = float(order)
    grid: GridSpec = u.grid
    out = np.zeros(grid.points)
    if q > 0 and q.is_integer():
        return u.with_values(out)
    x = grid.x if side is Side.LEFT else -grid.x
    period = 2 * grid.half_width
    vals = u.values
    for m in range(terms):
        expo = 1 + q + m
        coef = poch(1 + q, m) / math.factorial(m)
        if coef == 0:
            continue
        moment = grid.spacing * float(np.dot(x**m, vals))
        if expo <= 1:
            # divergent image sum; the moment must vanish
            continue
        out += coef * moment * period**-expo * zeta(expo, 1 + x / period)
    return u.with_values(out / gamma(-q))
