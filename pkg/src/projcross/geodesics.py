"""Random geodesic drawings of K_n on the sphere and on the projective plane.

Points are uniform on the unit sphere (normalised 3-d Gaussians).  On the
sphere two vertices are joined by the minor great-circle arc; on the
projective plane by the image of the shorter of the arcs to q and to -q.

Random numbers come from numpy's PCG64 seeded through
``SeedSequence([seed, chunk])``; work is cut into fixed-size chunks, so an
estimate depends only on (model, samples, seed), never on the worker count.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Literal

import numpy as np

SCHEMA_MC = "projcross-montecarlo/1"
RNG_NAME = "PCG64 via numpy SeedSequence([seed, chunk])"
EPS = 1e-12
CHUNK = 1 << 16

Model = Literal["sphere", "projective"]

TARGET_PAIR = {"sphere": 1 / 8, "projective": 1 / math.pi**2}


class DegenerateConfiguration(ValueError):
    """Measure-zero input (coincident, antipodal or orthogonal points); resample."""


@dataclass
class McEstimate:
    model: str
    samples: int
    mean: float
    std_error: float
    seed: int
    target: float | None = None
    resamples: int = 0
    n: int | None = None

    def z_score(self) -> float:
        if self.target is None:
            raise ValueError("no target")
        if self.std_error == 0:
            return 0.0 if self.mean == self.target else math.inf
        return (self.mean - self.target) / self.std_error

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_MC,
            "model": self.model,
            "n": self.n,
            "samples": self.samples,
            "mean": self.mean,
            "std_error": self.std_error,
            "seed": self.seed,
            "rng": RNG_NAME,
            "target": self.target,
            "resamples": self.resamples,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        row = self.to_json()
        w = csv.DictWriter(buf, fieldnames=list(row), lineterminator="\n")
        w.writeheader()
        w.writerow(row)
        return buf.getvalue()


def _generator(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, stream])))


def sample_sphere(rng: np.random.Generator, size: int | tuple) -> np.ndarray:
    shape = (size, 3) if isinstance(size, int) else (*size, 3)
    g = rng.standard_normal(shape)
    return g / np.linalg.norm(g, axis=-1, keepdims=True)


def canonical_projective(v: np.ndarray) -> np.ndarray:
    """Representative of {v, -v} whose first nonzero coordinate is positive."""
    v = np.asarray(v, dtype=float)
    first = np.take_along_axis(v, np.argmax(v != 0, axis=-1)[..., None], axis=-1)
    return np.where(first < 0, -v, v)


def _dot(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", x, y)


def _normalise(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norm = np.linalg.norm(x, axis=-1)
    return x / np.where(norm > 0, norm, 1)[..., None], norm


def _in_arc(a: np.ndarray, b: np.ndarray, normal: np.ndarray, c: np.ndarray) -> np.ndarray:
    return (_dot(np.cross(a, c), normal) > 0) & (_dot(np.cross(c, b), normal) > 0)


def _in_closed_arc(a: np.ndarray, b: np.ndarray, normal: np.ndarray, c: np.ndarray) -> np.ndarray:
    on_circle = np.abs(_dot(c, normal)) < EPS
    return on_circle & (_dot(np.cross(a, c), normal) > -EPS) & (_dot(np.cross(c, b), normal) > -EPS)


def arcs_cross_batch(a1, b1, a2, b2) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised minor-arc intersection test; returns (crosses, degenerate)."""
    n1, l1 = _normalise(np.cross(a1, b1))
    n2, l2 = _normalise(np.cross(a2, b2))
    d, ld = _normalise(np.cross(n1, n2))
    # arcs on a common great circle: disjoint ones are fine, overlapping ones are not
    cocircular = ld < EPS
    overlap = np.zeros(cocircular.shape, dtype=bool)
    for c in (a2, b2):
        overlap |= _in_closed_arc(a1, b1, n1, c)
    for c in (a1, b1):
        overlap |= _in_closed_arc(a2, b2, n2, c)
    degenerate = (l1 < EPS) | (l2 < EPS) | (cocircular & overlap)
    hit = np.zeros(degenerate.shape, dtype=bool)
    for c in (d, -d):
        hit |= _in_arc(a1, b1, n1, c) & _in_arc(a2, b2, n2, c)
    return hit & ~degenerate & ~cocircular, degenerate


def _lift(p: np.ndarray, q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Choose q or -q, whichever is closer to p; flag near-orthogonal pairs."""
    pq = _dot(p, q)
    return np.where((pq < 0)[..., None], -q, q), np.abs(pq) < EPS


def paths_cross_batch(p1, q1, p2, q2) -> tuple[np.ndarray, np.ndarray]:
    q1, deg1 = _lift(p1, q1)
    q2, deg2 = _lift(p2, q2)
    direct, deg3 = arcs_cross_batch(p1, q1, p2, q2)
    mirror, deg4 = arcs_cross_batch(p1, q1, -p2, -q2)
    degenerate = deg1 | deg2 | deg3 | deg4
    return (direct | mirror) & ~degenerate, degenerate


def _scalar(fn, *pts) -> bool:
    arrays = [np.asarray(p, dtype=float)[None, :] for p in pts]
    hit, degenerate = fn(*arrays)
    if degenerate[0]:
        raise DegenerateConfiguration("degenerate configuration")
    return bool(hit[0])


def arcs_cross_sphere(a1, b1, a2, b2) -> bool:
    """True iff the minor great-circle arcs a1b1 and a2b2 intersect."""
    return _scalar(arcs_cross_batch, a1, b1, a2, b2)


def paths_cross_projective(p1, q1, p2, q2) -> bool:
    """True iff the shortest projective paths p1q1 and p2q2 cross."""
    return _scalar(paths_cross_batch, p1, q1, p2, q2)


def _predicate(model: Model):
    if model == "sphere":
        return arcs_cross_batch
    if model == "projective":
        return paths_cross_batch
    raise ValueError(f"unknown model {model!r}")


def _pair_chunk(model: Model, seed: int, chunk: int, size: int) -> tuple[int, int]:
    rng = _generator(seed, chunk)
    fn = _predicate(model)
    pts = sample_sphere(rng, (4, size))
    hits, bad = fn(*pts)
    resamples = 0
    while bad.any():
        idx = np.flatnonzero(bad)
        resamples += len(idx)
        fresh = sample_sphere(rng, (4, len(idx)))
        pts[:, idx] = fresh
        h, b = fn(*fresh)
        hits[idx], bad[idx] = h, b
    return int(hits.sum()), resamples


def _bernoulli_se(hits: int, samples: int) -> float:
    if samples < 2:
        return 0.0
    p = hits / samples
    var = samples / (samples - 1) * p * (1 - p)
    return math.sqrt(var / samples)


def estimate_pair_probability(model: Model, samples: int, seed: int, threads: int = 1) -> McEstimate:
    """Probability that the paths of two disjoint random vertex pairs cross."""
    if samples < 1:
        raise ValueError("at least one sample required")
    _predicate(model)
    sizes = [min(CHUNK, samples - s) for s in range(0, samples, CHUNK)]

    def job(i):
        return _pair_chunk(model, seed, i, sizes[i])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(len(sizes))))
    else:
        parts = [job(i) for i in range(len(sizes))]
    hits = sum(h for h, _ in parts)
    return McEstimate(
        model=model,
        samples=samples,
        mean=hits / samples,
        std_error=_bernoulli_se(hits, samples),
        seed=seed,
        target=TARGET_PAIR[model],
        resamples=sum(r for _, r in parts),
    )


def disjoint_edge_pairs(n: int) -> np.ndarray:
    """All unordered pairs of vertex-disjoint edges of K_n, as rows (i, j, k, l)."""
    edges = list(combinations(range(n), 2))
    rows = [(*e, *f) for e, f in combinations(edges, 2) if not set(e) & set(f)]
    return np.asarray(rows, dtype=np.int64).reshape(-1, 4)


def count_drawing_crossings(model: Model, points: np.ndarray, pairs: np.ndarray | None = None) -> tuple[int, bool]:
    """Crossings of the random drawing on the given vertex positions; (count, degenerate)."""
    if pairs is None:
        pairs = disjoint_edge_pairs(len(points))
    if model == "projective":
        points = canonical_projective(points)
    hit, bad = _predicate(model)(*(points[pairs[:, c]] for c in range(4)))
    return int(hit.sum()), bool(bad.any())


def estimate_expected_crossings(model: Model, n: int, drawings: int, seed: int,
                                threads: int = 1) -> McEstimate:
    """Mean number of crossings of a random geodesic drawing of K_n."""
    if n < 4:
        raise ValueError("n must be at least 4")
    if drawings < 1:
        raise ValueError("at least one drawing required")
    _predicate(model)
    pairs = disjoint_edge_pairs(n)

    def job(i):
        rng = _generator(seed, i)
        tries = 0
        while True:
            count, bad = count_drawing_crossings(model, sample_sphere(rng, n), pairs)
            if not bad:
                return count, tries
            tries += 1

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(job, range(drawings)))
    else:
        parts = [job(i) for i in range(drawings)]
    counts = np.asarray([c for c, _ in parts], dtype=float)
    se = float(counts.std(ddof=1) / math.sqrt(drawings)) if drawings > 1 else 0.0
    return McEstimate(
        model=model,
        samples=drawings,
        mean=float(counts.mean()),
        std_error=se,
        seed=seed,
        target=len(pairs) * TARGET_PAIR[model],
        resamples=sum(r for _, r in parts),
        n=n,
    )
