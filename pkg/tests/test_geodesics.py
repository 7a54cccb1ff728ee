import math

import numpy as np
import pytest

from projcross.geodesics import (
    CHUNK,
    TARGET_PAIR,
    DegenerateConfiguration,
    arcs_cross_sphere,
    canonical_projective,
    disjoint_edge_pairs,
    estimate_expected_crossings,
    estimate_pair_probability,
    paths_cross_projective,
    sample_sphere,
)


def unit(*v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


N, E, S, W = unit(0, 0, 1), unit(1, 0, 0), unit(0, 0, -1), unit(-1, 0, 0)


def test_disjoint_octants():
    assert not arcs_cross_sphere(N, E, S, W)


def test_straddling_arc():
    eps = 1e-3
    a = (unit(1, 0, 0), unit(-eps, 1, 0))
    b = (unit(0.7, 0.7, 0.1), unit(0.7, 0.7, -0.1))
    assert arcs_cross_sphere(*a, *b)
    assert arcs_cross_sphere(*b, *a)


def test_overlapping_cocircular_is_degenerate():
    with pytest.raises(DegenerateConfiguration):
        arcs_cross_sphere(unit(1, 0, 0), unit(0, 1, 0), unit(1, 1, 0), unit(-1, 1, 0))


def test_projective_local_disjoint():
    a = (unit(0.1, 0, 1), unit(0.2, 0, 1))
    b = (unit(-0.1, 0.1, 1), unit(-0.2, 0.2, 1))
    assert not paths_cross_projective(*a, *b)


def test_projective_uses_shorter_lift():
    # q and -q give the same projective point
    p1, q1 = unit(0.2, 0, 1), unit(-0.2, 0, 1)
    p2, q2 = unit(0, 0.2, 1), unit(0, -0.2, 1)
    assert paths_cross_projective(p1, q1, p2, q2)
    assert paths_cross_projective(p1, -q1, -p2, q2)


def test_orthogonal_lift_is_degenerate():
    with pytest.raises(DegenerateConfiguration):
        paths_cross_projective(unit(1, 0, 0), unit(0, 1, 0), unit(0.3, 0.3, 1), unit(0.5, -0.2, 1))


def _random_rotation(rng):
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def test_quotient_consistency():
    rng = np.random.default_rng(7)
    checked = 0
    for _ in range(2000):
        # four points in a cap of radius < pi/8 around a random pole
        rot = _random_rotation(rng)
        pts = sample_sphere(rng, 4)
        pts[:, 2] = np.abs(pts[:, 2]) + 3
        pts = (pts / np.linalg.norm(pts, axis=1, keepdims=True)) @ rot.T
        assert paths_cross_projective(*pts) == arcs_cross_sphere(*pts)
        checked += 1
    assert checked == 2000


def test_symmetry_and_rotation():
    rng = np.random.default_rng(11)
    for _ in range(500):
        pts = sample_sphere(rng, 4)
        rot = _random_rotation(rng)
        moved = pts @ rot.T
        for fn in (arcs_cross_sphere, paths_cross_projective):
            v = fn(*pts)
            assert fn(pts[2], pts[3], pts[0], pts[1]) == v
            assert fn(pts[1], pts[0], pts[3], pts[2]) == v
            assert fn(*moved) == v


def test_canonical_projective():
    v = np.array([[0.0, -0.6, 0.8], [-1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    c = canonical_projective(v)
    assert np.allclose(c, [[0.0, 0.6, -0.8], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])
    assert np.allclose(canonical_projective(-v), c)


def test_octant_uniformity():
    stats = pytest.importorskip("scipy.stats")
    pts = sample_sphere(np.random.default_rng(3), 10**6)
    assert np.allclose(np.linalg.norm(pts, axis=1), 1, atol=1e-12)
    octant = (pts > 0).astype(int) @ np.array([4, 2, 1])
    counts = np.bincount(octant, minlength=8)
    assert stats.chisquare(counts).pvalue > 0.001


def test_single_sample():
    r = estimate_pair_probability("sphere", 1, seed=5)
    assert r.mean in (0.0, 1.0)


def test_deterministic_and_thread_independent():
    n = 2 * CHUNK + 17
    a = estimate_pair_probability("projective", n, seed=9)
    b = estimate_pair_probability("projective", n, seed=9, threads=3)
    assert a.to_json() == b.to_json()
    assert estimate_pair_probability("projective", n, seed=10).mean != a.mean


def test_pair_probabilities_medium():
    for model in ("sphere", "projective"):
        r = estimate_pair_probability(model, 200_000, seed=42)
        assert r.target == TARGET_PAIR[model]
        assert abs(r.z_score()) < 4


def test_expected_crossings_n4():
    r = estimate_expected_crossings("sphere", 4, 4000, seed=1)
    assert r.target == pytest.approx(3 / 8)
    assert abs(r.z_score()) < 4


def test_disjoint_pairs_count():
    for n in (4, 5, 8):
        assert len(disjoint_edge_pairs(n)) == 3 * math.comb(n, 4)


def test_errors():
    with pytest.raises(ValueError):
        estimate_expected_crossings("sphere", 4, 0, seed=1)
    with pytest.raises(ValueError):
        estimate_expected_crossings("sphere", 3, 10, seed=1)
    with pytest.raises(ValueError):
        estimate_pair_probability("torus", 10, seed=1)
    with pytest.raises(ValueError):
        estimate_pair_probability("sphere", 0, seed=1)


def test_estimate_serialisation():
    r = estimate_pair_probability("sphere", 1000, seed=2)
    doc = r.to_json()
    assert doc["seed"] == 2 and doc["samples"] == 1000 and "PCG64" in doc["rng"]
    assert r.to_csv().splitlines()[0].startswith("schema,model")
