"""Drawing parameters and the integer angular grid shared by every module.

Angles are measured in half-steps: one full turn is ``2*m`` units, where
``m = 4k + 1`` is the number of vertices on each circle.  The v- and
u-vertices sit on even angles, the w-vertices on odd ones, so every
coordinate used by the construction and by the crossing predicates is an
integer.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

VertexClass = Literal["U", "V", "W", "VW"]


class ParamsError(ValueError):
    """Raised for inadmissible drawing parameters."""


@dataclass(frozen=True)
class Params:
    k: int
    a: int
    b: int

    def __post_init__(self) -> None:
        if not isinstance(self.k, int) or self.k < 1:
            raise ParamsError(f"k must be a positive integer, got {self.k!r}")
        for name in ("a", "b"):
            level = getattr(self, name)
            if not isinstance(level, int) or not 0 <= level <= 2 * self.k:
                raise ParamsError(
                    f"{name} must be an integer in [0, {2 * self.k}], got {level!r}"
                )

    @property
    def n(self) -> int:
        return 8 * self.k + 2

    @property
    def m(self) -> int:
        return 4 * self.k + 1

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.a, self.k)

    @property
    def beta(self) -> Fraction:
        return Fraction(self.b, self.k)

    @property
    def turn(self) -> int:
        """Number of angular units in a full turn."""
        return 2 * self.m

    def as_dict(self) -> dict:
        return {
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "a": self.a,
            "b": self.b,
            "alpha": str(self.alpha),
            "beta": str(self.beta),
        }


def make_params(k: int, a: int, b: int) -> Params:
    return Params(k, a, b)


def params_from_rationals(k: int, alpha: Fraction, beta: Fraction) -> Params:
    """Build Params from rational alpha/beta, requiring alpha*k and beta*k integral."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    a, b = alpha * k, beta * k
    if a.denominator != 1 or b.denominator != 1:
        raise ParamsError(f"alpha*k={a} and beta*k={b} must both be integers (k={k})")
    return Params(k, int(a), int(b))


@dataclass(frozen=True, order=True)
class VertexId:
    cls: VertexClass
    index: int

    def __str__(self) -> str:
        return f"{self.cls.lower()}{self.index}"


def vertex(cls: VertexClass, index: int, p: Params) -> VertexId:
    return VertexId(cls, index % p.m)


def signed_offset(i: int, j: int, m: int) -> int:
    """Representative d of (j - i) mod m with |d| <= (m - 1) // 2; m must be odd."""
    d = (j - i) % m
    return d - m if d > m // 2 else d


def cyclic_distance(i: int, j: int, m: int) -> int:
    return abs(signed_offset(i, j, m))


def angle_of(v: VertexId, p: Params) -> int:
    if v.cls in ("U", "V"):
        return (2 * v.index) % p.turn
    if v.cls == "W":
        # w_i is antipodal to v_i, i.e. between v_{i+2k} and v_{i+2k+1}
        return (2 * v.index + p.m) % p.turn
    raise ValueError(f"vertex class {v.cls!r} has no position in the auxiliary model")


def polygon_order(p: Params) -> list[VertexId]:
    """Boundary of the identification polygon w_0 v_{2k+1} w_1 v_{2k+2} ... w_{4k} v_{2k}."""
    out = []
    for i in range(p.m):
        out.append(VertexId("W", i))
        out.append(VertexId("V", (i + 2 * p.k + 1) % p.m))
    return out
