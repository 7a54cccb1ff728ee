import math
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from projcross.core import Params, VertexId
from projcross.drawing import AuxEdge, build_auxiliary
from projcross.engine import (
    TYPES,
    DrawingError,
    Segment,
    SegmentTable,
    _kernel,
    count_crossings,
    count_table,
    d_adjacent_crossings,
    decompose,
    responsibility,
    segments_cross,
    type_name,
)
from projcross.formulas import all_type_counts, taut_green_brown

K1 = Params(1, 1, 1)
K2 = Params(2, 2, 2)
ALL_SETS = [Params(k, a, b) for k in (1, 2, 3, 4) for a in range(2 * k + 1) for b in range(2 * k + 1)]
SMALL = [p for p in ALL_SETS if p.k <= 2]


def edge(color, x, y, offset):
    return AuxEdge(color, (VertexId(*x), VertexId(*y)), offset)


# -- decomposition ---------------------------------------------------------

def test_decompose_brown():
    e = edge("brown", ("W", 0), ("U", 2), 2)
    assert decompose(e, K1) == [Segment("WV-spanner", 5, 0), Segment("VU-spanner", 5, -1)]


def test_decompose_green_red():
    assert decompose(edge("green", ("V", 2), ("U", 3), 1), K1) == [Segment("VU-spanner", 4, 2)]
    assert decompose(edge("red", ("V", 0), ("V", 1), 1), K1) == [Segment("VU-chord", 0, 2)]


@pytest.mark.parametrize("p", SMALL, ids=str)
def test_spanners_short(p):
    for e in build_auxiliary(p).edges:
        for s in decompose(e, p):
            if not s.is_chord:
                assert abs(s.delta) < p.m


# -- predicates ------------------------------------------------------------

def test_green_vs_brown_inner():
    assert segments_cross(Segment("VU-spanner", 4, 2), Segment("VU-spanner", 5, -1), K1) == 1


def test_blue_vs_radial():
    assert segments_cross(Segment("WV-spanner", 5, -1), Segment("WV-spanner", 7, 0), K1) == 0


def test_red_vs_brown_inner():
    assert segments_cross(Segment("VU-chord", 4, 2), Segment("VU-spanner", 5, -1), K1) == 1


def test_regions_never_meet():
    assert segments_cross(Segment("U-disk-chord", 0, 4), Segment("VU-chord", 2, 4), K1) == 0
    assert segments_cross(Segment("WV-spanner", 5, 0), Segment("VU-spanner", 4, 2), K1) == 0


def test_chords_interleave():
    p = K2
    assert segments_cross(Segment("U-disk-chord", 0, 4), Segment("U-disk-chord", 2, 4), p) == 1
    assert segments_cross(Segment("U-disk-chord", 0, 8), Segment("U-disk-chord", 2, 2), p) == 0
    assert segments_cross(Segment("U-disk-chord", 0, 4), Segment("U-disk-chord", 4, 4), p) == 0


SEG_KINDS = ("U-disk-chord", "VU-chord", "VU-spanner", "WV-spanner")


@st.composite
def segment_pairs(draw):
    k = draw(st.integers(1, 5))
    m = 4 * k + 1
    out = []
    for _ in range(2):
        region = draw(st.sampled_from(SEG_KINDS))
        x = draw(st.integers(-3 * m, 3 * m))
        if region.endswith("chord"):
            x -= x % 2
            delta = 2 * draw(st.integers(1, m - 1))
        else:
            delta = draw(st.integers(-(m - 1), m - 1))
        out.append(Segment(region, x, delta))
    return Params(k, k, k), out


@settings(max_examples=400, deadline=None)
@given(segment_pairs())
def test_vectorised_matches_scalar(case):
    p, (s1, s2) = case
    if s1.annulus != s2.annulus:
        return
    tab = SegmentTable.from_segments(p.turn, [("black", (0, 1), (0, 1), [s1]), ("black", (2, 3), (2, 3), [s2])])
    kind = lambda s: 0 if s.is_chord else 1
    got = _kernel(tab, np.array([0]), np.array([1]), kind(s1), kind(s2))[0, 0]
    assert got == segments_cross(s1, s2, p)


def test_scalar_symmetric():
    p = Params(2, 1, 3)
    segs = [s for e in build_auxiliary(p).edges for s in decompose(e, p)][::7]
    for s1 in segs:
        for s2 in segs:
            assert segments_cross(s1, s2, p) == segments_cross(s2, s1, p)


# -- counts ----------------------------------------------------------------

def test_counts_k1():
    b = count_crossings(build_auxiliary(K1))
    assert b.counts_a == {
        "black-black": 5, "red-red": 0, "blue-brown": 0, "red-green": 0, "green-brown": 10,
        "red-brown": 10, "green-green": 5, "brown-brown": 0, "blue-blue": 0,
    }
    assert b.total_d == 30


def test_counts_k2():
    b = count_crossings(build_auxiliary(K2))
    assert list(b.counts_a.values()) == [126, 9, 72, 45, 180, 108, 90, 36, 36]
    assert b.counts_d["blue-blue"] == 18
    assert b.total_a == 702 and b.total_d == 684


def test_no_red_edges():
    b = count_crossings(build_auxiliary(Params(1, 0, 0)))
    assert b.counts_a["red-red"] == b.counts_a["red-green"] == b.counts_a["red-brown"] == 0


@pytest.mark.parametrize("p", [p for p in ALL_SETS if p.k <= 3], ids=str)
def test_engine_matches_closed_forms_taut(p):
    # green-brown is checked against its taut form, valid for every alpha
    b = count_crossings(build_auxiliary(p))
    expected = all_type_counts(p)
    expected["green-brown"] = taut_green_brown(p)
    assert b.counts_a == expected
    assert b.counts_a["blue-blue"] % 2 == 0
    assert b.total_d <= comb(p.n, 4)


@pytest.mark.parametrize("p", [Params(2, 1, 3), Params(3, 4, 2)], ids=str)
def test_no_crossings_at_shared_d_vertex(p):
    assert d_adjacent_crossings(build_auxiliary(p)) == 0


def test_thread_count_irrelevant():
    aux = build_auxiliary(Params(3, 2, 5))
    assert count_crossings(aux, threads=1).counts_a == count_crossings(aux, threads=3).counts_a


def test_rotation_invariance():
    p = Params(2, 3, 1)
    aux = build_auxiliary(p)
    tab = SegmentTable.from_drawing(aux)
    tab.x = tab.x + 2  # rotate everything by one index
    assert count_table(tab, p).counts_a == count_crossings(aux).counts_a


def test_black_black_is_c_m_4():
    for k in (1, 2, 3):
        p = Params(k, k, k)
        assert count_crossings(build_auxiliary(p)).counts_a["black-black"] == comb(p.m, 4)


# -- invariant enforcement --------------------------------------------------

def test_rejects_adjacent_crossing():
    recs = [
        ("black", (0, 2), (0, 2), [Segment("U-disk-chord", 0, 4)]),
        ("black", (0, 3), (0, 3), [Segment("U-disk-chord", 2, 4)]),
    ]
    with pytest.raises(DrawingError):
        count_table(SegmentTable.from_segments(10, recs))


def test_rejects_double_crossing():
    # two-segment edges whose pieces cross twice
    recs = [
        ("brown", (0, 1), (0, 1), [Segment("WV-spanner", 0, 2), Segment("VU-spanner", 2, 2)]),
        ("brown", (2, 3), (2, 3), [Segment("WV-spanner", 1, 0), Segment("VU-spanner", 1, 4)]),
    ]
    tab = SegmentTable.from_segments(10, recs)
    with pytest.raises(DrawingError):
        count_table(tab)


def test_rejects_odd_blue_blue():
    recs = [
        ("blue", (0, 1), (0, 1), [Segment("WV-spanner", 0, 2)]),
        ("blue", (2, 3), (2, 3), [Segment("WV-spanner", 2, -2)]),
    ]
    with pytest.raises(DrawingError):
        count_table(SegmentTable.from_segments(10, recs))


def test_rejects_unexpected_type():
    recs = [
        ("red", (0, 1), (0, 1), [Segment("VU-chord", 0, 4)]),
        ("blue", (2, 3), (2, 3), [Segment("VU-spanner", 2, 1)]),
    ]
    with pytest.raises(DrawingError):
        count_table(SegmentTable.from_segments(10, recs))


def test_accepts_good_injection():
    recs = [
        ("green", (0, 1), (0, 1), [Segment("VU-spanner", 0, 2)]),
        ("green", (2, 3), (2, 3), [Segment("VU-spanner", 2, -2)]),
    ]
    assert count_table(SegmentTable.from_segments(10, recs)).counts_a["green-green"] == 1


# -- geometric oracle -------------------------------------------------------

shapely = pytest.importorskip("shapely")
from shapely.geometry import LineString  # noqa: E402

RADII = {"W": 3.0, "V": 2.0, "U": 1.0}
SAG = 0.0005


def _xy(units, r, m):
    phi = math.pi * units / m
    return (r * math.cos(phi), r * math.sin(phi))


def _polar(x, delta, r0, r1, m, steps=160):
    return [_xy(x + delta * t / steps, r0 + (r1 - r0) * t / steps, m) for t in range(steps + 1)]


def _geometry(e, p):
    """Polyline drawn from the routing rules alone, independent of the predicates."""
    m, k = p.m, p.k
    (x0, y0), i = e.endpoints, e.endpoints[0].index
    j = y0.index
    if e.color == "black":
        return LineString([_xy(2 * i, 1.0, m), _xy(2 * j, 1.0, m)])
    if e.color == "red":
        lo, hi = 2 * i, 2 * i + 2 * e.offset
        pts = [(u, 2.0 - SAG * (u - lo) * (hi - u)) for u in np.linspace(lo, hi, 161)]
        return LineString([_xy(u, r, m) for u, r in pts])
    if e.color == "green":
        s = e.offset if e.offset <= m // 2 else e.offset - m
        return LineString(_polar(2 * i, 2 * s, 2.0, 1.0, m))
    start = 2 * i + m
    if e.color == "blue":
        return LineString(_polar(start, 2 * e.offset - m, 3.0, 2.0, m))
    gap = 2 * i + 4 * k + 1
    assert gap == start
    return LineString([_xy(start, 3.0, m)] + _polar(gap, 2 * e.offset - m, 2.0, 1.0, m))


def _geometric_counts(p):
    aux = build_auxiliary(p)
    geoms = [_geometry(e, p) for e in aux.edges]
    counts = {t: 0 for t in TYPES}
    edges = aux.edges
    for a in range(len(edges)):
        for b in range(a + 1, len(edges)):
            if set(edges[a].endpoints) & set(edges[b].endpoints):
                continue
            if not geoms[a].intersects(geoms[b]):
                continue
            inter = geoms[a].intersection(geoms[b])
            n = len(getattr(inter, "geoms", [inter]))
            assert n == 1, f"{edges[a]} and {edges[b]} meet {n} times"
            counts[type_name(edges[a].color, edges[b].color)] += 1
    return counts


@pytest.mark.parametrize("p", [Params(1, a, b) for a in range(3) for b in range(3)] + [K2, Params(2, 1, 3)], ids=str)
def test_geometric_oracle(p):
    assert _geometric_counts(p) == count_crossings(build_auxiliary(p)).counts_a


# -- responsibility ----------------------------------------------------------

def test_responsibility_sum_k1():
    r = responsibility(build_auxiliary(K1))
    assert r.total() == 120


@pytest.mark.parametrize("p", [K1, K2, Params(2, 1, 3), Params(3, 3, 3)], ids=str)
def test_responsibility_orbit_equals_exhaustive(p):
    aux = build_auxiliary(p)
    orbit = responsibility(aux, "orbit")
    full = responsibility(aux, "exhaustive")
    assert orbit.per_vertex == full.per_vertex
    assert full.total() == 4 * count_crossings(aux).total_d
    for cls, s in full.by_class().items():
        assert s["min"] == s["max"]


def test_responsibility_unknown_method():
    with pytest.raises(ValueError):
        responsibility(build_auxiliary(K1), "guess")


def test_responsibility_json():
    doc = responsibility(build_auxiliary(K1)).to_json()
    assert set(doc["classes"]) == {"U", "VW"}
    assert sum(Fraction(v) for v in doc["vertices"].values()) == 120
