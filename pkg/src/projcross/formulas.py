"""Closed-form crossing counts of D(alpha, beta, n) and the density polynomial f.

Everything here is exact: integers and ``fractions.Fraction``.  The only
irrational constant, 1/(8 pi^2), is carried as a certified rational interval.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import factorial

from .core import Params
from .engine import TYPES

Number = int | Fraction


def binom(x: Number, r: int) -> int:
    """Polynomial binomial x(x-1)...(x-r+1)/r! for integral x.

    Zero for 0 <= x < r.  Negative x keeps the polynomial value, which is the
    reading under which the n^4 coefficient of ``pcr_exact`` equals ``f_eval``.
    """
    x = Fraction(x)
    if x.denominator != 1:
        raise ValueError(f"binomial upper index must be integral, got {x}")
    num = 1
    for i in range(r):
        num *= int(x) - i
    q, rem = divmod(num, factorial(r))
    assert rem == 0
    return q


def _integral(v: Fraction) -> int:
    if v.denominator != 1:
        raise ArithmeticError(f"closed form evaluated to non-integer {v}")
    return v.numerator


def type_count(kind: str, p: Params) -> int:
    """Crossings of one type in the auxiliary model A."""
    k, m = p.k, p.m
    al, be = p.alpha, p.beta
    if kind == "black-black":
        v = Fraction(binom(m, 4))
    elif kind == "red-red":
        v = Fraction(1, 4) * m * binom(2 * be * k, 3)
    elif kind == "blue-brown":
        v = 4 * k * m * (2 - al) * binom((2 - be) * k, 2)
    elif kind == "red-green":
        v = Fraction(m * binom(be * k, 2)) * (2 * al * k + 1)
    elif kind == "green-brown":
        v = Fraction(2 * m * (binom(2 * k + 1, 3) - binom(2 * (al - 1) * k + 1, 3)))
    elif kind == "red-brown":
        # carries the factor k of the summed expression, not of the per-type statement
        v = 2 * m * (2 - al) * k * binom(be * k + 1, 2)
    elif kind == "green-green":
        v = Fraction(m * binom(2 * al * k + 1, 3))
    elif kind == "brown-brown":
        v = Fraction(m * binom(2 * (2 - al) * k, 3))
    elif kind == "blue-blue":
        v = Fraction(m * binom(2 * (2 - be) * k, 3))
    else:
        raise KeyError(kind)
    return _integral(v)


def all_type_counts(p: Params) -> dict[str, int]:
    return {t: type_count(t, p) for t in TYPES}


def taut_green_brown(p: Params) -> int:
    """Green-brown crossings of the taut drawing for every alpha.

    Equal to ``type_count("green-brown", p)`` for alpha >= 1.  Below 1 the
    roles of green and brown swap (alpha <-> 2 - alpha) and the subtracted
    binomial becomes C(2(1-alpha)k, 3).
    """
    if p.a >= p.k:
        return type_count("green-brown", p)
    return 2 * p.m * (binom(2 * p.k + 1, 3) - binom(2 * (p.k - p.a), 3))


def pcr_exact(p: Params) -> int:
    """Crossings of D: the eight A-counts plus half the blue-blue count, summed term by term."""
    k, m = p.k, p.m
    al, be = p.alpha, p.beta
    terms = [
        Fraction(binom(4 * k + 1, 4)),
        Fraction(1, 4) * m * binom(2 * be * k, 3),
        4 * k * m * (2 - al) * binom(2 * k - be * k, 2),
        m * (2 * al * k + 1) * binom(be * k, 2),
        Fraction(2 * m * (binom(2 * k + 1, 3) - binom(2 * (al - 1) * k + 1, 3))),
        2 * m * (2 - al) * k * binom(be * k + 1, 2),
        Fraction(m * binom(2 * al * k + 1, 3)),
        Fraction(m * binom(2 * (2 - al) * k, 3)),
        Fraction(1, 2) * m * binom(2 * (2 - be) * k, 3),
    ]
    return _integral(sum(terms, Fraction(0)))


def _unit_interval(x: Fraction, name: str) -> Fraction:
    x = Fraction(x)
    if not 0 <= x <= 2:
        raise ValueError(f"{name} must lie in [0, 2], got {x}")
    return x


def f_terms(alpha: Number, beta: Number) -> list[Fraction]:
    """Terms of f in printed order, one per summand of ``pcr_exact`` (before the 1/8^4 factor)."""
    al = _unit_interval(alpha, "alpha")
    be = _unit_interval(beta, "beta")
    return [
        Fraction(32, 3),
        Fraction(4, 3) * be**3,
        8 * (2 - al) * (2 - be) ** 2,
        4 * al * be**2,
        Fraction(32, 3) - Fraction(32, 3) * (al - 1) ** 3,
        4 * (2 - al) * be**2,
        Fraction(16, 3) * al**3,
        Fraction(16, 3) * (2 - al) ** 3,
        Fraction(8, 3) * (2 - be) ** 3,
    ]


def f_eval(alpha: Number, beta: Number) -> Fraction:
    return sum(f_terms(alpha, beta), Fraction(0)) / 8**4


def f_float(alpha: float, beta: float) -> float:
    """Floating-point twin of ``f_eval`` for numerical cross-checks."""
    al, be = alpha, beta
    s = (
        32 / 3
        + 4 * be**3 / 3
        + 8 * (2 - al) * (2 - be) ** 2
        + 4 * al * be**2
        + 32 / 3
        - 32 / 3 * (al - 1) ** 3
        + 4 * (2 - al) * be**2
        + 16 / 3 * al**3
        + 16 / 3 * (2 - al) ** 3
        + 8 / 3 * (2 - be) ** 3
    )
    return s / 4096


def hill_value(n: int) -> int:
    """Conjectured plane crossing number of K_n."""
    if n < 1:
        raise ValueError("n must be positive")
    num = (n // 2) * ((n - 1) // 2) * ((n - 2) // 2) * ((n - 3) // 2)
    assert num % 4 == 0
    return num // 4


# ---------------------------------------------------------------------------
# constants


@dataclass(frozen=True)
class Interval:
    """Closed rational interval certified to contain an irrational value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty interval")

    def certainly_above(self, x: Number) -> bool:
        return self.lo > x

    def certainly_below(self, x: Number) -> bool:
        return self.hi < x

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def width(self) -> Fraction:
        return self.hi - self.lo


# 15 significant digits, truncated and rounded up
PI_LO = Fraction("3.14159265358979")
PI_HI = Fraction("3.14159265358980")
PI_INTERVAL = Interval(PI_LO, PI_HI)

HILL_DENSITY = Fraction(1, 64)
KOMAN_DENSITY = Fraction(13, 1024)
KOMAN_DENSITY_QUOTED = Fraction(13, 1028)
EXTENDED_BOUND = Fraction("0.012547")
THEOREM_THRESHOLD = Fraction("0.0126")


def elkies_density(pi: Interval = PI_INTERVAL) -> Interval:
    """1/(8 pi^2) enclosed using the given enclosure of pi (pi > 0)."""
    return Interval(1 / (8 * pi.hi**2), 1 / (8 * pi.lo**2))


def projective_pair_probability(pi: Interval = PI_INTERVAL) -> Interval:
    """1/pi^2 enclosed the same way."""
    return Interval(1 / pi.hi**2, 1 / pi.lo**2)


def constants() -> dict[str, dict]:
    elk = elkies_density()
    return {
        "hill_density": rational_json(HILL_DENSITY),
        "elkies_density": interval_json(elk),
        "koman_density": rational_json(KOMAN_DENSITY),
        "koman_density_quoted": rational_json(KOMAN_DENSITY_QUOTED),
        "extended_bound": rational_json(EXTENDED_BOUND),
        "theorem_threshold": rational_json(THEOREM_THRESHOLD),
    }


def decimal_str(x: Fraction, digits: int = 20) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(x.numerator) / Decimal(x.denominator))


def rational_json(x: Number, digits: int = 20) -> dict:
    x = Fraction(x)
    return {"value": f"{x.numerator}/{x.denominator}", "decimal": decimal_str(x, digits), "precision": digits}


def interval_json(iv: Interval, digits: int = 20) -> dict:
    return {
        "lo": rational_json(iv.lo, digits),
        "hi": rational_json(iv.hi, digits),
        "decimal": decimal_str(iv.midpoint(), 15),
        "error_bound": decimal_str(iv.width(), 3),
    }


def theorem1_chain() -> dict:
    """Exact check of f(11/10, 1) < 0.0126 < 1/(8 pi^2)."""
    fv = f_eval(Fraction(11, 10), 1)
    elk = elkies_density()
    first = fv < THEOREM_THRESHOLD
    second = elk.certainly_above(THEOREM_THRESHOLD)
    return {
        "f(11/10,1)": rational_json(fv),
        "threshold": rational_json(THEOREM_THRESHOLD),
        "elkies_density": interval_json(elk),
        "f_below_threshold": first,
        "threshold_below_elkies": second,
        "pass": first and second,
    }
