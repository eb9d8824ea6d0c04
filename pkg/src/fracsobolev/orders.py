"""Fractional orders and operator sides."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from fracsobolev.errors import DecompositionParseError, InvalidOrderError


class Side(enum.Enum):
    """Side of a Riemann-Liouville operator."""

    #: Integrates over :math:`(-\infty, x]`.
    LEFT = "L"
    #: Integrates over :math:`[x, \infty)`.
    RIGHT = "R"

    @property
    def opposite(self) -> Side:
        return Side.RIGHT if self is Side.LEFT else Side.LEFT

    @classmethod
    def parse(cls, text: str | Side) -> Side:
        if isinstance(text, Side):
            return text
        key = text.strip().upper()
        if key in ("L", "LEFT"):
            return cls.LEFT
        if key in ("R", "RIGHT"):
            return cls.RIGHT
        raise InvalidOrderError(f"unknown side {text!r} (expected L or R)")


@dataclass(frozen=True)
class FractionalOrder:
    r"""An order :math:`s \ge 0` split as :math:`s = n - \sigma`.

    ``n`` is the smallest integer strictly greater than ``s`` and
    ``sigma`` lies in ``(0, 1]``; an integer order ``s`` therefore has
    ``n = s + 1`` and ``sigma = 1``.
    """

    s: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s) and self.s >= 0):
            raise InvalidOrderError(f"order must be finite and >= 0, got {self.s}")

    @property
    def n(self) -> int:
        return math.floor(self.s) + 1

    @property
    def sigma(self) -> float:
        return self.n - self.s

    @property
    def is_integer(self) -> bool:
        return float(self.s).is_integer()

    def __float__(self) -> float:
        return float(self.s)


def as_order(s: float | FractionalOrder) -> FractionalOrder:
    return s if isinstance(s, FractionalOrder) else FractionalOrder(float(s))


@dataclass(frozen=True)
class OrderDecomposition:
    """Factors ``(s_i, side_i)`` of a composite multiplier and a total order.

    The residual ``tau = total - sum(s_i)`` is the regularity left for the
    image of the composite map. ``total`` defaults to the sum of factors.
    """

    factors: tuple[tuple[float, Side], ...] = ()
    total: float | None = None

    def __post_init__(self) -> None:
        factors = tuple((float(s), Side.parse(side)) for s, side in self.factors)
        for s, _ in factors:
            if not (math.isfinite(s) and s >= 0):
                raise InvalidOrderError(f"factor order must be >= 0, got {s}")
        object.__setattr__(self, "factors", factors)
        total = sum(s for s, _ in factors) if self.total is None else float(self.total)
        # tolerate rounding in sums such as 0.1 + 0.2
        if total < sum(s for s, _ in factors) - 1e-12 * max(1.0, total):
            raise InvalidOrderError(
                f"sum of factor orders exceeds total order {total}"
            )
        object.__setattr__(self, "total", total)

    @property
    def residual(self) -> float:
        return max(0.0, self.total - sum(s for s, _ in self.factors))

    @classmethod
    def parse(cls, text: str, total: float | None = None) -> OrderDecomposition:
        """Parse ``"0.5:L,1:R"``; the empty string is the empty product."""
        text = text.strip()
        if not text:
            return cls((), total)
        factors = []
        for item in text.split(","):
            order, sep, side = item.strip().partition(":")
            if not sep or side.strip() not in ("L", "R"):
                raise DecompositionParseError(f"malformed factor {item!r}")
            try:
                value = float(order)
            except ValueError:
                raise DecompositionParseError(f"malformed order in {item!r}") from None
            if not (math.isfinite(value) and value >= 0):
                raise DecompositionParseError(f"order must be >= 0 in {item!r}")
            factors.append((value, Side(side.strip())))
        return cls(tuple(factors), total)

    def format(self) -> str:
        return ",".join(f"{s!r}:{side.value}" for s, side in self.factors)
