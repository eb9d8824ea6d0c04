r"""Uniform grids, analytic test families, the Fourier transform and norms.

Functions live on the truncated line :math:`[-L, L)` sampled at
:math:`x_j = -L + j\Delta`, :math:`\Delta = 2L/N`. The transform follows the
ordinary-frequency convention

.. math::

    \hat u(\xi) = \int e^{-2\pi i x \xi} u(x) \,\mathrm{d}x,

discretized by the rectangle rule at :math:`\xi_k = k/(2L)`,
:math:`k = -N/2, \dots, N/2 - 1`. Because the grid starts at :math:`-L`, the
discrete coefficients are :math:`\Delta (-1)^k` times the standard FFT.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import hermite as H

from fracsobolev.errors import (
    DomainTooSmallError,
    GridMismatchError,
    SymmetryViolationError,
    UsageError,
)
from fracsobolev.orders import FractionalOrder, as_order

#: Maximum relative imaginary residue accepted by :func:`idft`.
SYMMETRY_TOL = 1e-8
#: Imaginary residues below this are dropped silently.
SILENT_IMAG_TOL = 1e-10
#: Required decay of Gaussian-type families at the domain boundary.
DECAY_TOL = 1e-14

DEFAULT_HALF_WIDTH = 16.0
DEFAULT_POINTS = 4096


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


# {{{ grid and sampled values


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid on ``[-half_width, half_width)`` with ``points`` nodes."""

    half_width: float = DEFAULT_HALF_WIDTH
    points: int = DEFAULT_POINTS

    def __post_init__(self) -> None:
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise UsageError(f"half width must be positive, got {self.half_width}")
        if int(self.points) != self.points or self.points < 8 or self.points % 2:
            raise UsageError(f"points must be an even integer >= 8, got {self.points}")
        object.__setattr__(self, "half_width", float(self.half_width))
        object.__setattr__(self, "points", int(self.points))

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def x(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    @property
    def k(self) -> np.ndarray:
        """Frequency indices ``-N/2 .. N/2 - 1``."""
        return np.arange(-(self.points // 2), self.points // 2)

    @property
    def xi(self) -> np.ndarray:
        return self.k / (2.0 * self.half_width)

    @property
    def bin_width(self) -> float:
        return 1.0 / (2.0 * self.half_width)

    @property
    def nyquist(self) -> int:
        """Position of the unpaired bin ``k = -N/2`` in :attr:`k` order."""
        return 0

    def dilated(self, kappa: float) -> GridSpec:
        """Grid whose nodes are ``kappa * x_j``."""
        return GridSpec(self.half_width * kappa, self.points)

    def index_of(self, x: float) -> int:
        """Index of the node at ``x``; ``x`` must be (close to) a node."""
        j = (x + self.half_width) / self.spacing
        jr = round(j)
        if abs(j - jr) > 1e-9 or not 0 <= jr < self.points:
            raise UsageError(f"{x} is not a grid node")
        return int(jr)


@dataclass(frozen=True)
class SampledFunction:
    """Real values ``values[j] = u(x_j)`` on a :class:`GridSpec`."""

    grid: GridSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values)
        if np.iscomplexobj(values):
            raise UsageError("sampled functions are real valued")
        values = values.astype(np.float64)
        if values.shape != (self.grid.points,):
            raise UsageError(
                f"expected {self.grid.points} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise UsageError("sampled values must be finite")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def x(self) -> np.ndarray:
        return self.grid.x

    def with_values(self, values: np.ndarray) -> SampledFunction:
        return SampledFunction(self.grid, values)

    def __add__(self, other: SampledFunction) -> SampledFunction:
        check_same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: SampledFunction) -> SampledFunction:
        check_same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, alpha: float) -> SampledFunction:
        return self.with_values(alpha * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> SampledFunction:
        return self.with_values(-self.values)


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients at ``xi_k = k / (2L)``, ``k = -N/2 .. N/2 - 1``."""

    grid: GridSpec
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if coeffs.shape != (self.grid.points,):
            raise UsageError(
                f"expected {self.grid.points} coefficients, got shape {coeffs.shape}"
            )
        object.__setattr__(self, "coeffs", _frozen(coeffs))

    @property
    def xi(self) -> np.ndarray:
        return self.grid.xi

    def conjugate_symmetry_defect(self) -> float:
        """Max ``|c[-k] - conj(c[k])|`` over paired bins."""
        c = self.coeffs[1:]
        return float(np.max(np.abs(c - np.conj(c[::-1])), initial=0.0))


def check_same_grid(u: SampledFunction, v: SampledFunction) -> None:
    if u.grid != v.grid:
        raise GridMismatchError(f"grid mismatch: {u.grid} vs {v.grid}")


def zeros(grid: GridSpec) -> SampledFunction:
    return SampledFunction(grid, np.zeros(grid.points))


def translate(u: SampledFunction, h: float) -> SampledFunction:
    r"""Periodic translation :math:`\tau_h u(x) = u(x - h)` by a grid multiple."""
    shift = h / u.grid.spacing
    if abs(shift - round(shift)) > 1e-9:
        raise UsageError(f"shift {h} is not a multiple of the spacing {u.grid.spacing}")
    return u.with_values(np.roll(u.values, int(round(shift))))


# }}}


# {{{ analytic test families

FAMILIES = ("gaussian", "hermite_gaussian", "bump", "sine_gaussian", "power_plus")


@dataclass(frozen=True)
class TestFunctionSpec:
    r"""Closed-form test function.

    ``gaussian``
        :math:`c\, e^{-\pi y^2}`, :math:`y = (x - b)/a`.
    ``hermite_gaussian``
        :math:`c\, H_m(\sqrt{2\pi}\, y)\, e^{-\pi y^2}` with physicists'
        Hermite polynomial of ``degree`` m; an eigenfunction of the transform
        with eigenvalue :math:`(-i)^m`.
    ``sine_gaussian``
        :math:`c\, \sin(2\pi\omega (x - b))\, e^{-\pi y^2}` (zero mean).
    ``bump``
        :math:`c\, \exp(-1/(1 - t^2))` for :math:`|t| < 1`,
        :math:`t = (x - b)/r`, zero elsewhere.
    ``power_plus``
        :math:`c\, (x - b)_+^\beta`, with value :math:`c/2` at :math:`x = b`
        when :math:`\beta = 0`.
    """

    __test__ = False

    family: str
    center: float = 0.0
    scale: float = 1.0
    amplitude: float = 1.0
    frequency: float = 0.0
    exponent: float = 1.0
    radius: float = 1.0
    degree: int = 1

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise UsageError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        for name in ("center", "scale", "amplitude", "frequency", "exponent", "radius"):
            if not math.isfinite(getattr(self, name)):
                raise UsageError(f"{name} must be finite")
        if self.scale <= 0:
            raise UsageError("scale must be positive")
        if self.radius <= 0:
            raise UsageError("radius must be positive")
        if self.exponent < 0:
            raise UsageError("exponent must be nonnegative")
        if int(self.degree) != self.degree or self.degree < 0:
            raise UsageError("degree must be a nonnegative integer")

    # gaussian-type families are Re[P(y) exp(-pi y^2 + i k y)]
    def _gaussian_form(self) -> tuple[Polynomial, float]:
        if self.family == "gaussian":
            return Polynomial([1.0 + 0j]), 0.0
        if self.family == "hermite_gaussian":
            coef = H.herm2poly([0] * self.degree + [1])
            p = Polynomial(coef).convert()
            # H_m(sqrt(2 pi) y)
            p = Polynomial(p.coef * math.sqrt(2 * math.pi) ** np.arange(p.coef.size))
            return Polynomial(p.coef.astype(complex)), 0.0
        if self.family == "sine_gaussian":
            return Polynomial([-1j]), 2 * math.pi * self.frequency * self.scale
        raise AssertionError(self.family)

    @property
    def is_gaussian_type(self) -> bool:
        return self.family in ("gaussian", "hermite_gaussian", "sine_gaussian")

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.derivative(x, 0)

    def derivative(self, x: np.ndarray, n: int = 0) -> np.ndarray:
        """Closed-form ``n``-th derivative evaluated at ``x``."""
        x = np.asarray(x, dtype=np.float64)
        c = self.amplitude
        if self.is_gaussian_type:
            p, kk = self._gaussian_form()
            phase = Polynomial([0, 1j * kk])
            lin = Polynomial([0, -2 * math.pi]) + phase.deriv()
            for _ in range(n):
                p = p.deriv() + lin * p
            y = (x - self.center) / self.scale
            val = p(y) * np.exp(1j * kk * y)
            return c * self.scale**-n * val.real * np.exp(-math.pi * y**2)
        if self.family == "bump":
            return c * self.radius**-n * _bump_derivative((x - self.center) / self.radius, n)
        return c * _power_plus_derivative(x - self.center, self.exponent, n)

    def envelope(self, x: np.ndarray) -> np.ndarray:
        """Magnitude bound used for the boundary decay check (amplitude excluded)."""
        p, _ = self._gaussian_form()
        y = (np.asarray(x, dtype=np.float64) - self.center) / self.scale
        return np.abs(p(y)) * np.exp(-math.pi * y**2)

    @property
    def support(self) -> tuple[float, float] | None:
        if self.family == "bump":
            return (self.center - self.radius, self.center + self.radius)
        return None

    def check_fits(self, grid: GridSpec) -> None:
        """Raise :class:`DomainTooSmallError` if the function is not contained."""
        L = grid.half_width
        if self.family == "bump":
            lo, hi = self.support
            if lo < -L or hi > L:
                raise DomainTooSmallError(
                    f"bump support [{lo}, {hi}] not inside [{-L}, {L}]"
                )
        elif self.is_gaussian_type:
            tail = float(np.max(self.envelope(np.array([-L, L]))))
            if tail > DECAY_TOL:
                raise DomainTooSmallError(
                    f"{self.family} decays only to {tail:.3e} at |x| = {L}"
                )

    def translated(self, h: float) -> TestFunctionSpec:
        return replace(self, center=self.center + h)

    def dilated(self, kappa: float) -> TestFunctionSpec:
        r"""Spec of :math:`x \mapsto u(\kappa x)`."""
        if kappa <= 0:
            raise UsageError("dilation factor must be positive")
        if self.family == "power_plus":
            return replace(
                self,
                center=self.center / kappa,
                amplitude=self.amplitude * kappa**self.exponent,
            )
        return replace(
            self,
            center=self.center / kappa,
            scale=self.scale / kappa,
            radius=self.radius / kappa,
            frequency=self.frequency * kappa,
        )

    def reflected(self) -> TestFunctionSpec:
        r"""Spec of :math:`x \mapsto u(-x)` (not available for ``power_plus``)."""
        if self.family == "power_plus":
            raise UsageError("power_plus is not closed under reflection")
        amp = self.amplitude
        if self.family == "sine_gaussian" or (
            self.family == "hermite_gaussian" and self.degree % 2
        ):
            amp = -amp
        return replace(self, center=-self.center, amplitude=amp)


def gaussian(center: float = 0.0, scale: float = 1.0, amplitude: float = 1.0) -> TestFunctionSpec:
    return TestFunctionSpec("gaussian", center=center, scale=scale, amplitude=amplitude)


def bump(center: float = 0.0, radius: float = 1.0, amplitude: float = 1.0) -> TestFunctionSpec:
    return TestFunctionSpec("bump", center=center, radius=radius, amplitude=amplitude)


def sine_gaussian(
    frequency: float = 1.0, center: float = 0.0, scale: float = 1.0, amplitude: float = 1.0
) -> TestFunctionSpec:
    return TestFunctionSpec(
        "sine_gaussian", center=center, scale=scale, amplitude=amplitude, frequency=frequency
    )


def hermite_gaussian(degree: int = 1, center: float = 0.0, scale: float = 1.0) -> TestFunctionSpec:
    return TestFunctionSpec("hermite_gaussian", center=center, scale=scale, degree=degree)


def power_plus(exponent: float = 1.0, center: float = 0.0, amplitude: float = 1.0) -> TestFunctionSpec:
    return TestFunctionSpec("power_plus", center=center, exponent=exponent, amplitude=amplitude)


def _bump_derivative(t: np.ndarray, n: int) -> np.ndarray:
    # f^(n) = Q_n(t) (1 - t^2)^(-2n) f,  Q_{n+1} = Q'(1-t^2)^2 + (4n t (1-t^2) - 2t) Q
    q = Polynomial([1.0])
    one_m_t2 = Polynomial([1.0, 0.0, -1.0])
    t_poly = Polynomial([0.0, 1.0])
    for m in range(n):
        q = q.deriv() * one_m_t2**2 + (4 * m * t_poly * one_m_t2 - 2 * t_poly) * q
    out = np.zeros_like(t)
    inside = np.abs(t) < 1
    ti = t[inside]
    w = 1.0 - ti**2
    out[inside] = q(ti) * np.exp(-1.0 / w - 2 * n * np.log(w))
    return out


def _power_plus_derivative(y: np.ndarray, beta: float, n: int) -> np.ndarray:
    coef = math.prod(beta - m for m in range(n))
    p = beta - n
    if p < 0 and coef != 0:
        raise UsageError(f"derivative of order {n} of x_+^{beta} is singular")
    out = np.zeros_like(y)
    pos = y > 0
    out[pos] = coef * y[pos] ** p
    if p == 0:
        # midpoint value at the jump
        out[y == 0] = 0.5 * coef
    return out


def sample(spec: TestFunctionSpec, grid: GridSpec) -> SampledFunction:
    """Evaluate ``spec`` at the grid nodes after checking it fits the domain."""
    spec.check_fits(grid)
    return SampledFunction(grid, spec(grid.x))


def sample_derivative(spec: TestFunctionSpec, grid: GridSpec, n: int) -> SampledFunction:
    """Closed-form ``n``-th derivative of ``spec`` at the grid nodes."""
    spec.check_fits(grid)
    return SampledFunction(grid, spec.derivative(grid.x, n))


# }}}


# {{{ transform


def _phase(grid: GridSpec) -> np.ndarray:
    # (-1)^k as exact +-1 floats
    return np.where(grid.k % 2 == 0, 1.0, -1.0)


def dft(u: SampledFunction) -> Spectrum:
    """Coefficients ``Delta * sum_j u_j exp(-2 pi i x_j xi_k)``."""
    g = u.grid
    # exact conjugate symmetry for real input
    half = np.fft.rfft(u.values)
    full = np.concatenate([half, np.conj(half[-2:0:-1])])
    c = g.spacing * _phase(g) * np.fft.fftshift(full)
    return Spectrum(g, c)


def idft(spec: Spectrum) -> SampledFunction:
    """Inverse of :func:`dft`; the imaginary residue is checked and dropped.

    Raises :class:`SymmetryViolationError` if the relative imaginary part
    exceeds :data:`SYMMETRY_TOL`.
    """
    g = spec.grid
    z = np.fft.ifft(np.fft.ifftshift(spec.coeffs * _phase(g))) / g.spacing
    scale = float(np.max(np.abs(z), initial=0.0))
    resid = float(np.max(np.abs(z.imag), initial=0.0))
    if scale > 0 and resid > SYMMETRY_TOL * scale:
        raise SymmetryViolationError(
            f"imaginary residue {resid / scale:.3e} (relative) after inversion"
        )
    if scale > 0 and resid > SILENT_IMAG_TOL * scale:
        warnings.warn(
            f"discarding imaginary residue {resid / scale:.3e} (relative)",
            RuntimeWarning,
            stacklevel=2,
        )
    return SampledFunction(g, z.real)


# }}}


# {{{ norms


def inner_product(u: SampledFunction, v: SampledFunction) -> float:
    """Rectangle-rule :math:`\\int u v`."""
    check_same_grid(u, v)
    return float(u.grid.spacing * np.dot(u.values, v.values))


def l2_norm(u: SampledFunction) -> float:
    return math.sqrt(inner_product(u, u))


def spectrum_l2_norm(spec: Spectrum) -> float:
    return math.sqrt(spec.grid.bin_width * float(np.sum(np.abs(spec.coeffs) ** 2)))


def spectral_inner_product(a: Spectrum, b: Spectrum) -> float:
    """``Re sum_k a_k conj(b_k) / (2L)``."""
    if a.grid != b.grid:
        raise GridMismatchError("spectra live on different grids")
    return float(a.grid.bin_width * np.real(np.vdot(b.coeffs, a.coeffs)))


def frequency_weight(grid: GridSpec, s: float) -> np.ndarray:
    r""":math:`|2\pi\xi_k|^{s}` with :math:`0^0 = 1`."""
    w = np.abs(2 * np.pi * grid.xi)
    return np.ones_like(w) if s == 0 else w**s


class SobolevNorm(NamedTuple):
    norm: float
    seminorm: float


def sobolev_norm(u: SampledFunction, s: float | FractionalOrder) -> SobolevNorm:
    r"""Fourier-side :math:`\widehat{H}^s` norm and seminorm.

    The seminorm is :math:`\big(\sum_k |2\pi\xi_k|^{2s}|\hat u_k|^2/(2L)\big)^{1/2}`
    and the norm adds :math:`\|u\|_2^2` under the square root.
    """
    s = float(as_order(s))
    c = dft(u).coeffs
    semi2 = u.grid.bin_width * float(np.sum(frequency_weight(u.grid, 2 * s) * np.abs(c) ** 2))
    return SobolevNorm(math.sqrt(l2_norm(u) ** 2 + semi2), math.sqrt(semi2))


def window_mask(grid: GridSpec, lo: float, hi: float) -> np.ndarray:
    x = grid.x
    return (x >= lo) & (x <= hi)


def windowed_rel_error(
    approx: SampledFunction | np.ndarray,
    exact: SampledFunction | np.ndarray,
    mask: np.ndarray | None = None,
) -> float:
    """Discrete L2 relative error, optionally restricted to ``mask``."""
    a = getattr(approx, "values", approx)
    b = getattr(exact, "values", exact)
    if mask is not None:
        a, b = a[mask], b[mask]
    den = float(np.linalg.norm(b))
    num = float(np.linalg.norm(a - b))
    if den == 0:
        return num
    return num / den


# }}}
