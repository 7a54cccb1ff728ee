"""Search for parameters with few crossings.

``minimize_f`` works on the density polynomial over [0, 2]^2 with exact
rational arithmetic; ``minimize_lattice`` scans every admissible (a, b) for a
fixed k using the exact crossing count.  Neither claims global optimality:
the result is an upper-bound certificate.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Params
from .formulas import f_eval, pcr_exact, rational_json

SCHEMA_RESULT = "projcross-minimize/1"


@dataclass
class MinimizationResult:
    argmin: tuple[Fraction, Fraction]
    value: Fraction
    method: str
    evaluations: int
    ties: list[tuple[Fraction, Fraction]] = field(default_factory=list)
    history: list[Fraction] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_RESULT,
            "method": self.method,
            "argmin": [str(self.argmin[0]), str(self.argmin[1])],
            "argmin_decimal": [float(self.argmin[0]), float(self.argmin[1])],
            "value": rational_json(self.value),
            "evaluations": self.evaluations,
            "ties": [[str(a), str(b)] for a, b in self.ties],
            "history": [str(v) for v in self.history],
            **self.extra,
        }


def _axis(lo: Fraction, hi: Fraction, intervals: int) -> list[Fraction]:
    step = (hi - lo) / intervals
    return [lo + i * step for i in range(intervals + 1)]


def _best(points: list[tuple[Fraction, Fraction]], threads: int = 1) -> tuple[Fraction, tuple, list]:
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(lambda pt: f_eval(*pt), points))
    else:
        values = [f_eval(*pt) for pt in points]
    best = min(values)
    ties = sorted(pt for pt, v in zip(points, values) if v == best)
    return best, ties[0], ties


def minimize_f(grid_step: Fraction = Fraction(1, 10), refine_rounds: int = 30,
               threads: int = 1) -> MinimizationResult:
    """Grid search over [0, 2]^2 followed by box-halving refinement around the incumbent."""
    grid_step = Fraction(grid_step)
    if grid_step <= 0:
        raise ValueError("grid step must be positive")
    if refine_rounds < 0:
        raise ValueError("refine_rounds must be non-negative")
    intervals = int(2 / grid_step)
    axis = sorted({i * grid_step for i in range(intervals + 1)} | {Fraction(2)})
    points = [(x, y) for x in axis for y in axis]
    value, arg, ties = _best(points, threads)
    evaluations = len(points)
    history = [value]
    grid_ties = ties

    width = Fraction(2)
    for _ in range(refine_rounds):
        width /= 2
        boxes = []
        for c in arg:
            lo, hi = max(Fraction(0), c - width / 2), min(Fraction(2), c + width / 2)
            boxes.append(_axis(lo, hi, max(1, intervals)))
        cand = {(x, y) for x in boxes[0] for y in boxes[1]} | {arg}
        cand = sorted(cand)
        v, a, _ = _best(cand, threads)
        evaluations += len(cand)
        if v < value or (v == value and a < arg):
            value, arg = v, a
        history.append(value)

    return MinimizationResult(
        argmin=arg,
        value=value,
        method="grid+refine" if refine_rounds else "grid",
        evaluations=evaluations,
        ties=grid_ties if refine_rounds == 0 else [arg],
        history=history,
        extra={"grid_step": str(grid_step), "refine_rounds": refine_rounds},
    )


def minimize_lattice(k: int, diagonal: bool = False) -> MinimizationResult:
    """Exhaustive minimum of the exact crossing count over admissible (a, b) for fixed k."""
    if k < 1:
        raise ValueError("k must be positive")
    levels = range(2 * k + 1)
    pairs = [(a, a) for a in levels] if diagonal else [(a, b) for a in levels for b in levels]
    counts = {(a, b): pcr_exact(Params(k, a, b)) for a, b in pairs}
    best = min(counts.values())
    ties = sorted((Fraction(a, k), Fraction(b, k)) for (a, b), c in counts.items() if c == best)
    n = 8 * k + 2
    return MinimizationResult(
        argmin=ties[0],
        value=Fraction(best),
        method="lattice",
        evaluations=len(pairs),
        ties=ties,
        extra={
            "k": k,
            "n": n,
            "diagonal": diagonal,
            "density": rational_json(Fraction(best, n**4)),
        },
    )
