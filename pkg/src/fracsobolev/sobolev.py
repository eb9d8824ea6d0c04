r"""Sign function, resolvent maps and the composite multiplier.

For a single order ``s`` the map :math:`T: v \mapsto u = v + \chi(s) D^s v`
has the Fourier form :math:`\hat u = (1 + \chi(s)(2\pi i\xi)^s)\hat v`. The sign
:math:`\chi(s)` is chosen so that :math:`\chi(s)\cos(s\pi/2) \ge 0`, whence

.. math::

    |1 + \chi(s)(\pm 2\pi i\xi)^s|^2 \ge 1 + |2\pi\xi|^{2s}

and the map is invertible by bin-wise division. A composite multiplier
:math:`f(\xi) = \prod_i (1 + \chi(s_i)(\pm 2\pi i\xi)^{s_i})` chains such maps.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from fracsobolev.errors import EmptyBatteryError
from fracsobolev.grid import (
    GridSpec,
    SampledFunction,
    Spectrum,
    TestFunctionSpec,
    bump,
    check_same_grid,
    dft,
    frequency_weight,
    idft,
    inner_product,
    l2_norm,
    sample,
    sobolev_norm,
)
from fracsobolev.orders import OrderDecomposition, Side
from fracsobolev.spectral import (
    grid_symbol,
    hermitian_on_grid,
    spectral_rl_derivative,
    symbol,
    top_octave_fraction,
)

#: Spectral power below this fraction of the peak is ignored by the slope fit.
SLOPE_FLOOR = 1e-26

#: Bump battery used when no test functions are given.
DEFAULT_BATTERY: tuple[TestFunctionSpec, ...] = tuple(
    bump(center=c, radius=1.0) for c in (-2.0, -1.0, 0.0, 1.0, 2.0)
)


def chi(s: float) -> int:
    r"""Sign :math:`\chi(s) \in \{+1, -1\}`.

    In terms of ``s`` it is ``+1`` on ``[0, 1]`` and on ``[3 + 4k, 5 + 4k]``,
    and ``-1`` on ``(1 + 4k, 3 + 4k)``, ``k = 0, 1, ...``. The value at
    ``s = 0`` is a convention (the zero-order factor becomes ``2``).
    """
    if not (math.isfinite(s) and s >= 0):
        raise ValueError(f"chi is defined for s >= 0, got {s}")
    if s <= 1:
        return 1
    r = (s - 1) % 4
    return -1 if 0 < r < 2 else 1


def factor_symbol(xi: float | np.ndarray, s: float, side: Side = Side.LEFT):
    """``1 + chi(s) * symbol(xi, s, side)``."""
    return 1 + chi(s) * symbol(xi, s, side)


def composite_symbol(xi: float | np.ndarray, decomp: OrderDecomposition):
    """Product of :func:`factor_symbol` over the factors (empty product is 1)."""
    out = np.ones(np.shape(xi), dtype=np.complex128)
    for s, side in decomp.factors:
        out = out * factor_symbol(xi, s, side)
    return complex(out) if out.ndim == 0 else out


def composite_grid_multiplier(grid: GridSpec, decomp: OrderDecomposition) -> np.ndarray:
    """:func:`composite_symbol` at the grid bins, each factor made Hermitian.

    At the unpaired bin every factor reduces to its real part, which is at
    least 1, so the product never vanishes there either.
    """
    out = np.ones(grid.points, dtype=np.complex128)
    for s, side in decomp.factors:
        out *= 1 + chi(s) * grid_symbol(grid, s, side)
    return hermitian_on_grid(grid, out)


def forward_map(v: SampledFunction, decomp: OrderDecomposition) -> SampledFunction:
    """``u`` with ``u_hat = f * v_hat``; the empty decomposition returns ``v``."""
    if not decomp.factors:
        return v
    f = composite_grid_multiplier(v.grid, decomp)
    return idft(Spectrum(v.grid, f * dft(v).coeffs))


def inverse_map(u: SampledFunction, decomp: OrderDecomposition) -> SampledFunction:
    """``v`` with ``v_hat = u_hat / f``; ``|f| >= 1`` so division is safe."""
    if not decomp.factors:
        return u
    f = composite_grid_multiplier(u.grid, decomp)
    return idft(Spectrum(u.grid, dft(u).coeffs / f))


def weak_derivative_residual(
    u: SampledFunction,
    w: SampledFunction,
    mu: float,
    side: Side = Side.LEFT,
    battery: Sequence[TestFunctionSpec] = DEFAULT_BATTERY,
) -> float:
    r"""How far ``w`` is from being the weak derivative of ``u``.

    For the left derivative the defining relation is
    :math:`(u, D^{\mu*}\psi) = (w, \psi)` for all test functions; the right
    derivative pairs against :math:`D^{\mu}\psi`. Returns

    .. math::

        \max_\psi \frac{|(u, D^{\mu,\mathrm{opp}}\psi) - (w, \psi)|}
            {(\|u\| + \|w\|)\,\|\psi\|}

    over the battery, and ``0`` when the denominator vanishes.
    """
    if not battery:
        raise EmptyBatteryError("weak-derivative battery is empty")
    check_same_grid(u, w)
    side = Side.parse(side)
    scale = l2_norm(u) + l2_norm(w)
    worst = 0.0
    for spec in battery:
        psi = sample(spec, u.grid)
        d_psi = spectral_rl_derivative(psi, mu, side.opposite)
        den = scale * l2_norm(psi)
        if den == 0:
            continue
        worst = max(worst, abs(inner_product(u, d_psi) - inner_product(w, psi)) / den)
    return worst


@dataclass(frozen=True)
class MembershipReport:
    """Numerical indicators for membership of ``u`` in the order-``s`` space.

    A finite grid cannot decide membership; no verdict is given.
    """

    order: float
    l2: float
    norm: float
    seminorm: float
    #: Share of the squared seminorm carried by ``|xi| >= xi_max / 2``.
    top_octave_fraction: float
    #: Log-log slope of ``|u_hat|^2`` against ``|xi|`` over the top two octaves.
    spectral_slope: float | None

    def as_dict(self) -> dict:
        return {
            "order": self.order,
            "l2": self.l2,
            "norm": self.norm,
            "seminorm": self.seminorm,
            "top_octave_fraction": self.top_octave_fraction,
            "spectral_slope": self.spectral_slope,
        }


def membership_report(u: SampledFunction, s: float) -> MembershipReport:
    grid = u.grid
    c = dft(u).coeffs
    power = np.abs(c) ** 2
    norm, semi = sobolev_norm(u, s)
    frac = top_octave_fraction(grid, frequency_weight(grid, 2 * s) * power)

    abs_k = np.abs(grid.k)
    # bins at the rounding floor carry no slope information
    floor = SLOPE_FLOOR * float(np.max(power, initial=0.0))
    band = (abs_k >= grid.points // 8) & (power > floor) & (power > 0)
    slope = None
    if np.count_nonzero(band) >= 2:
        lx = np.log(np.abs(grid.xi[band]))
        if np.ptp(lx) > 0:
            slope = float(np.polyfit(lx, np.log(power[band]), 1)[0])
    return MembershipReport(float(s), l2_norm(u), norm, semi, frac, slope)
