"""Fractional Riemann-Liouville operators on a uniform grid.

Two independent evaluations are provided: Fourier multipliers
(:mod:`fracsobolev.spectral`) and product integration of the singular kernel
(:mod:`fracsobolev.quadrature`). :mod:`fracsobolev.sobolev` builds the
resolvent maps between fractional Sobolev spaces and
:mod:`fracsobolev.verify` checks the identities relating all of them.
"""

from __future__ import annotations

from fracsobolev.errors import (
    DecompositionParseError,
    DomainTooSmallError,
    EmptyBatteryError,
    FracSobolevError,
    GridMismatchError,
    InvalidOrderError,
    NonzeroMeanError,
    NumericalError,
    SmoothnessWarning,
    SymmetryViolationError,
    UsageError,
)
from fracsobolev.grid import (
    GridSpec,
    SampledFunction,
    SobolevNorm,
    Spectrum,
    TestFunctionSpec,
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
    translate,
)
from fracsobolev.orders import FractionalOrder, OrderDecomposition, Side
from fracsobolev.quadrature import image_tail, rl_derivative, rl_integral
from fracsobolev.sobolev import (
    MembershipReport,
    chi,
    composite_symbol,
    forward_map,
    inverse_map,
    membership_report,
    weak_derivative_residual,
)
from fracsobolev.spectral import spectral_rl_derivative, spectral_rl_integral, symbol

__version__ = "0.1.0"

__all__ = [
    "DecompositionParseError",
    "DomainTooSmallError",
    "EmptyBatteryError",
    "FracSobolevError",
    "FractionalOrder",
    "GridMismatchError",
    "GridSpec",
    "InvalidOrderError",
    "MembershipReport",
    "NonzeroMeanError",
    "NumericalError",
    "OrderDecomposition",
    "SampledFunction",
    "Side",
    "SmoothnessWarning",
    "SobolevNorm",
    "Spectrum",
    "SymmetryViolationError",
    "TestFunctionSpec",
    "UsageError",
    "bump",
    "chi",
    "composite_symbol",
    "dft",
    "forward_map",
    "gaussian",
    "hermite_gaussian",
    "idft",
    "image_tail",
    "inner_product",
    "inverse_map",
    "l2_norm",
    "membership_report",
    "power_plus",
    "rl_derivative",
    "rl_integral",
    "sample",
    "sample_derivative",
    "sine_gaussian",
    "sobolev_norm",
    "spectral_rl_derivative",
    "spectral_rl_integral",
    "symbol",
    "translate",
    "weak_derivative_residual",
]
