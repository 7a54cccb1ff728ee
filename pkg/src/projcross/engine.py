"""Exact crossing counts for the auxiliary model A and the projective drawing D.

Every edge is routed tautly and decomposed into segments that live in one of
three regions: the disk bounded by U, the annulus VU, or the annulus WV.
Segments in different regions never meet.  Inside a region a segment is
either a chord (both ends on one circle, drawn along its short arc) or a
spanner (one end on each boundary circle, angularly monotone).  A spanner is
stored as lifted angles (x, x + delta) with |delta| < m half-steps, so two
spanners are straight lines in the universal cover of the annulus and cross
exactly once per translate 2*m*t that separates their endpoint differences.

All predicates are integer-only.  D is never re-drawn: its counts follow from
A with blue-blue crossings halved.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import Params, VertexId, angle_of
from .drawing import COLORS, AuxEdge, AuxiliaryDrawing, d_vertex

SCHEMA_COUNTS = "projcross-counts/1"

TYPES = (
    "black-black",
    "red-red",
    "blue-brown",
    "red-green",
    "green-brown",
    "red-brown",
    "green-green",
    "brown-brown",
    "blue-blue",
)

REGIONS = ("U-disk-chord", "VU-chord", "VU-spanner", "WV-spanner")
_ANNULUS = {"U-disk-chord": 0, "VU-chord": 1, "VU-spanner": 1, "WV-spanner": 2}
_CHORD, _SPANNER = 0, 1


def type_name(c1: str, c2: str) -> str:
    for t in TYPES:
        x, y = t.split("-")
        if {x, y} == {c1, c2} and (x == y) == (c1 == c2):
            return t
    return "-".join(sorted((c1, c2)))


class DrawingError(AssertionError):
    """A crossing invariant of a good drawing was violated."""


@dataclass(frozen=True)
class Segment:
    region: str
    x: int
    delta: int

    @property
    def is_chord(self) -> bool:
        return self.region.endswith("chord")

    @property
    def annulus(self) -> int:
        return _ANNULUS[self.region]


def _forward(d: int, m: int) -> int:
    """Spanner displacement 2*d - m for a forward index offset d."""
    return 2 * d - m


def decompose(e: AuxEdge, p: Params) -> list[Segment]:
    m = p.m
    x0 = angle_of(e.endpoints[0], p)
    if e.color == "black":
        return [Segment("U-disk-chord", x0, 2 * e.offset)]
    if e.color == "red":
        return [Segment("VU-chord", x0, 2 * e.offset)]
    if e.color == "green":
        s = e.offset if e.offset <= m // 2 else e.offset - m
        return [Segment("VU-spanner", x0, 2 * s)]
    if e.color == "blue":
        return [Segment("WV-spanner", x0, _forward(e.offset, m))]
    if e.color == "brown":
        # radial through WV, entering V in the gap between v_{i+2k} and v_{i+2k+1}
        return [
            Segment("WV-spanner", x0, 0),
            Segment("VU-spanner", x0, _forward(e.offset, m)),
        ]
    raise ValueError(f"unknown color {e.color!r}")


def _inside(pt: int, x: int, delta: int, turn: int) -> bool:
    lo, span = (x, delta) if delta > 0 else (x + delta, -delta)
    r = (pt - lo) % turn
    return 0 < r < span


def segments_cross(s1: Segment, s2: Segment, p: Params) -> int:
    """Number of crossings (0 or 1) between two segments of non-adjacent edges."""
    if s1.annulus != s2.annulus:
        return 0
    turn = p.turn
    if s1.is_chord and s2.is_chord:
        ends1 = {s1.x % turn, (s1.x + s1.delta) % turn}
        a2, b2 = s2.x % turn, (s2.x + s2.delta) % turn
        if a2 in ends1 or b2 in ends1:
            return 0
        return int(_inside(a2, s1.x, s1.delta, turn) != _inside(b2, s1.x, s1.delta, turn))
    if s1.is_chord or s2.is_chord:
        chord, sp = (s1, s2) if s1.is_chord else (s2, s1)
        return int(_inside(sp.x, chord.x, chord.delta, turn))
    diff_out = s1.x - s2.x
    diff_in = diff_out + s1.delta - s2.delta
    lo = min(diff_out, diff_in) // turn
    hits = [
        t
        for t in range(lo, lo + 3)
        if (diff_out - turn * t) * (diff_in - turn * t) < 0
    ]
    assert len(hits) <= 1, "spanners with |delta| < m cross at most once"
    return len(hits)


# ---------------------------------------------------------------------------
# vectorised evaluation


@dataclass
class SegmentTable:
    """Flat numpy view of all segments plus per-edge metadata."""

    turn: int
    annulus: np.ndarray
    kind: np.ndarray
    x: np.ndarray
    delta: np.ndarray
    edge: np.ndarray
    edge_color: np.ndarray
    ends_a: np.ndarray
    ends_d: np.ndarray
    labels: list[str] = field(default_factory=list)

    @classmethod
    def from_segments(
        cls,
        turn: int,
        edges: Sequence[tuple[str, tuple[int, int], tuple[int, int], Sequence[Segment]]],
    ) -> "SegmentTable":
        """Build from (color, A-endpoint ids, D-endpoint ids, segments) records."""
        ann, kind, xs, ds, owner = [], [], [], [], []
        for idx, (_, _, _, segs) in enumerate(edges):
            for s in segs:
                ann.append(s.annulus)
                kind.append(_CHORD if s.is_chord else _SPANNER)
                xs.append(s.x)
                ds.append(s.delta)
                owner.append(idx)
        return cls(
            turn=turn,
            annulus=np.asarray(ann, dtype=np.int8),
            kind=np.asarray(kind, dtype=np.int8),
            x=np.asarray(xs, dtype=np.int64),
            delta=np.asarray(ds, dtype=np.int64),
            edge=np.asarray(owner, dtype=np.int64),
            edge_color=np.asarray([COLORS.index(c) for c, *_ in edges], dtype=np.int64),
            ends_a=np.asarray([a for _, a, _, _ in edges], dtype=np.int64).reshape(-1, 2),
            ends_d=np.asarray([d for _, _, d, _ in edges], dtype=np.int64).reshape(-1, 2),
        )

    @classmethod
    def from_drawing(cls, aux: AuxiliaryDrawing) -> "SegmentTable":
        p = aux.params
        aid = _vertex_ids(p)
        records = []
        for e in aux.edges:
            a = tuple(aid[v] for v in e.endpoints)
            d = tuple(aid[d_vertex(v)] for v in e.endpoints)
            records.append((e.color, a, d, decompose(e, p)))
        table = cls.from_segments(p.turn, records)
        table.labels = [str(e) for e in aux.edges]
        return table

    @property
    def n_edges(self) -> int:
        return len(self.edge_color)

    def multi_segment_edges(self) -> np.ndarray:
        return np.bincount(self.edge, minlength=self.n_edges) > 1


def _vertex_ids(p: Params) -> dict[VertexId, int]:
    m = p.m
    ids = {}
    for c, base in (("U", 0), ("V", m), ("W", 2 * m), ("VW", 3 * m)):
        for i in range(m):
            ids[VertexId(c, i)] = base + i
    return ids


def _inside_mat(pt: np.ndarray, lo: np.ndarray, span: np.ndarray, turn: int) -> np.ndarray:
    r = (pt - lo) % turn
    return (r > 0) & (r < span)


def _arc(x: np.ndarray, d: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    return np.where(d > 0, x, x + d), np.abs(d)


def _kernel(tab: SegmentTable, rows: np.ndarray, cols: np.ndarray, kr: int, kc: int) -> np.ndarray:
    """Crossing-count matrix between row segments of kind kr and column segments of kind kc."""
    turn = tab.turn
    xr, dr = tab.x[rows][:, None], tab.delta[rows][:, None]
    xc, dc = tab.x[cols][None, :], tab.delta[cols][None, :]
    if kr == _SPANNER and kc == _SPANNER:
        p = xr - xc
        q = p + dr - dc
        lo, hi = np.minimum(p, q), np.maximum(p, q)
        hits = np.where(hi > lo, (hi - 1) // turn - lo // turn, 0)
        return hits
    if kr == _CHORD and kc == _CHORD:
        lo, span = _arc(xr, dr)
        a2, b2 = xc % turn, (xc + dc) % turn
        a1, b1 = xr % turn, (xr + dr) % turn
        shared = (a2 == a1) | (a2 == b1) | (b2 == a1) | (b2 == b1)
        inter = _inside_mat(a2, lo, span, turn) != _inside_mat(b2, lo, span, turn)
        return (inter & ~shared).astype(np.int64)
    if kr == _CHORD:
        lo, span = _arc(xr, dr)
        return _inside_mat(xc, lo, span, turn).astype(np.int64)
    lo, span = _arc(xc, dc)
    return _inside_mat(xr, lo, span, turn).astype(np.int64)


def _blocks(n: int, size: int) -> list[tuple[int, int]]:
    return [(s, min(n, s + size)) for s in range(0, n, size)]


@dataclass
class _Tally:
    pair_counts: np.ndarray  # 5x5 by color code, upper-triangular use
    adjacent_a: int = 0
    adjacent_d: int = 0
    max_hits: int = 0
    multi_multi: int = 0

    def merge(self, other: "_Tally") -> None:
        self.pair_counts += other.pair_counts
        self.adjacent_a += other.adjacent_a
        self.adjacent_d += other.adjacent_d
        self.max_hits = max(self.max_hits, other.max_hits)
        self.multi_multi += other.multi_multi


def _shares(ends_r: np.ndarray, ends_c: np.ndarray) -> np.ndarray:
    r0, r1 = ends_r[:, 0][:, None], ends_r[:, 1][:, None]
    c0, c1 = ends_c[:, 0][None, :], ends_c[:, 1][None, :]
    return (r0 == c0) | (r0 == c1) | (r1 == c0) | (r1 == c1)


def _tally_block(tab: SegmentTable, rows: np.ndarray, cols: np.ndarray, kr: int, kc: int,
                 upper: bool, multi: np.ndarray) -> _Tally:
    hits = _kernel(tab, rows, cols, kr, kc)
    if upper:
        hits = np.where(rows[:, None] < cols[None, :], hits, 0)
    er, ec = tab.edge[rows], tab.edge[cols]
    cr, cc = tab.edge_color[er], tab.edge_color[ec]
    lo, hi = np.minimum(cr[:, None], cc[None, :]), np.maximum(cr[:, None], cc[None, :])
    counts = np.bincount((lo * 5 + hi).ravel(), weights=hits.ravel(), minlength=25)
    tally = _Tally(counts.astype(np.int64).reshape(5, 5))
    tally.max_hits = int(hits.max(initial=0))
    tally.adjacent_a = int(hits[_shares(tab.ends_a[er], tab.ends_a[ec])].sum())
    tally.adjacent_d = int(hits[_shares(tab.ends_d[er], tab.ends_d[ec])].sum())
    tally.multi_multi = int(hits[multi[er][:, None] & multi[ec][None, :]].sum())
    return tally


def _region_groups(tab: SegmentTable, region: int) -> dict[int, np.ndarray]:
    sel = tab.annulus == region
    return {k: np.flatnonzero(sel & (tab.kind == k)) for k in (_CHORD, _SPANNER)}


def _block_rows(n_cols: int, budget: int = 1 << 21) -> int:
    return max(1, budget // max(1, n_cols))


def _count_table(tab: SegmentTable, threads: int = 1) -> tuple[_Tally, dict[int, int]]:
    multi = tab.multi_segment_edges()
    jobs = []
    for region in range(3):
        groups = _region_groups(tab, region)
        for kr, kc, upper in ((_CHORD, _CHORD, True), (_SPANNER, _SPANNER, True), (_CHORD, _SPANNER, False)):
            rows, cols = groups[kr], groups[kc]
            if len(rows) == 0 or len(cols) == 0:
                continue
            for s, t in _blocks(len(rows), _block_rows(len(cols))):
                jobs.append((region, rows[s:t], cols, kr, kc, upper))

    def run(job):
        region, rows, cols, kr, kc, upper = job
        return region, _tally_block(tab, rows, cols, kr, kc, upper, multi)

    total = _Tally(np.zeros((5, 5), dtype=np.int64))
    multi_by_region: dict[int, int] = {}
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    for region, t in results:
        total.merge(t)
        multi_by_region[region] = multi_by_region.get(region, 0) + t.multi_multi
    return total, multi_by_region


def _double_crossing_pairs(tab: SegmentTable) -> int:
    """Edge pairs of multi-segment edges that cross in total more than once."""
    multi = tab.multi_segment_edges()
    keys = []
    ne = tab.n_edges
    for region in range(3):
        groups = _region_groups(tab, region)
        for kr, kc, upper in ((_CHORD, _CHORD, True), (_SPANNER, _SPANNER, True), (_CHORD, _SPANNER, False)):
            rows = groups[kr][multi[tab.edge[groups[kr]]]]
            cols = groups[kc][multi[tab.edge[groups[kc]]]]
            if len(rows) == 0 or len(cols) == 0:
                continue
            hits = _kernel(tab, rows, cols, kr, kc)
            if upper:
                hits = np.where(rows[:, None] < cols[None, :], hits, 0)
            r, c = np.nonzero(hits)
            er, ec = tab.edge[rows[r]], tab.edge[cols[c]]
            keys.append(np.minimum(er, ec) * ne + np.maximum(er, ec))
    if not keys:
        return 0
    _, counts = np.unique(np.concatenate(keys), return_counts=True)
    return int((counts > 1).sum())


@dataclass
class CrossingBreakdown:
    params: Params | None
    counts_a: dict[str, int]

    @property
    def total_a(self) -> int:
        return sum(self.counts_a.values())

    @property
    def counts_d(self) -> dict[str, int]:
        out = dict(self.counts_a)
        out["blue-blue"] = self.counts_a["blue-blue"] // 2
        return out

    @property
    def total_d(self) -> int:
        return self.total_a - self.counts_a["blue-blue"] // 2

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_COUNTS,
            "kind": "breakdown",
            "params": self.params.as_dict() if self.params else None,
            "types": list(TYPES),
            "A": self.counts_a,
            "D": self.counts_d,
            "total_A": self.total_a,
            "total_D": self.total_d,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["type", "A", "D"])
        d = self.counts_d
        for t in TYPES:
            w.writerow([t, self.counts_a[t], d[t]])
        w.writerow(["total", self.total_a, self.total_d])
        return buf.getvalue()


def _breakdown_from_tally(counts: np.ndarray) -> tuple[dict[str, int], dict[str, int]]:
    named, other = {t: 0 for t in TYPES}, {}
    for i in range(5):
        for j in range(i, 5):
            c = int(counts[i, j])
            name = type_name(COLORS[i], COLORS[j])
            if name in named:
                named[name] += c
            elif c:
                other[name] = c
    return named, other


def count_table(tab: SegmentTable, params: Params | None = None, threads: int = 1) -> CrossingBreakdown:
    tally, multi_by_region = _count_table(tab, threads)
    if tally.max_hits > 1:
        raise DrawingError("a segment pair crosses more than once")
    if tally.adjacent_a:
        raise DrawingError(f"{tally.adjacent_a} crossings between adjacent edges")
    if sum(1 for v in multi_by_region.values() if v) > 1 and _double_crossing_pairs(tab):
        raise DrawingError("an edge pair crosses more than once")
    named, other = _breakdown_from_tally(tally.pair_counts)
    if other:
        raise DrawingError(f"unexpected crossing types {other}")
    if named["blue-blue"] % 2:
        raise DrawingError("odd number of blue-blue crossings cannot be halved")
    return CrossingBreakdown(params, named)


def count_crossings(aux: AuxiliaryDrawing, threads: int = 1) -> CrossingBreakdown:
    return count_table(SegmentTable.from_drawing(aux), aux.params, threads)


def d_adjacent_crossings(aux: AuxiliaryDrawing) -> int:
    """Crossings in A between edges whose images in D share a vertex."""
    tally, _ = _count_table(SegmentTable.from_drawing(aux))
    return tally.adjacent_d


# ---------------------------------------------------------------------------
# responsibility


def _edge_weighted_crossings(tab: SegmentTable, edge_ids: Iterable[int]) -> dict[int, int]:
    """Twice the D-weighted crossings on each requested A-edge (blue-blue weighs 1/2)."""
    wanted = np.zeros(tab.n_edges, dtype=bool)
    wanted[list(edge_ids)] = True
    blue = COLORS.index("blue")
    out = np.zeros(tab.n_edges, dtype=np.int64)
    for region in range(3):
        groups = _region_groups(tab, region)
        for kr in (_CHORD, _SPANNER):
            rows_all = groups[kr][wanted[tab.edge[groups[kr]]]]
            for kc in (_CHORD, _SPANNER):
                cols = groups[kc]
                if len(rows_all) == 0 or len(cols) == 0:
                    continue
                for s, t in _blocks(len(rows_all), _block_rows(len(cols))):
                    rows = rows_all[s:t]
                    hits = _kernel(tab, rows, cols, kr, kc)
                    er, ec = tab.edge[rows], tab.edge[cols]
                    both_blue = (tab.edge_color[er][:, None] == blue) & (tab.edge_color[ec][None, :] == blue)
                    weighted = (hits * np.where(both_blue, 1, 2)).sum(axis=1)
                    np.add.at(out, er, weighted)
    return {int(e): int(out[e]) for e in np.flatnonzero(wanted)}


@dataclass
class ResponsibilityReport:
    params: Params
    per_vertex: dict[VertexId, Fraction]
    method: str

    def by_class(self) -> dict[str, dict[str, float]]:
        out = {}
        for cls in ("U", "VW"):
            vals = [v for key, v in self.per_vertex.items() if key.cls == cls]
            out[cls] = {
                "min": min(vals),
                "max": max(vals),
                "mean": sum(vals, Fraction(0)) / len(vals),
            }
        return out

    def total(self) -> Fraction:
        return sum(self.per_vertex.values(), Fraction(0))

    def normalized(self) -> dict[str, float]:
        """Class means divided by n^3."""
        n3 = self.params.n ** 3
        return {cls: float(s["mean"] / n3) for cls, s in self.by_class().items()}

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_COUNTS,
            "kind": "responsibility",
            "params": self.params.as_dict(),
            "method": self.method,
            "classes": {
                cls: {key: str(val) for key, val in s.items()} for cls, s in self.by_class().items()
            },
            "normalized_by_n3": self.normalized(),
            "vertices": {str(v): str(r) for v, r in sorted(self.per_vertex.items())},
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["vertex", "class", "responsibility"])
        for v, r in sorted(self.per_vertex.items()):
            w.writerow([str(v), v.cls, str(r)])
        return buf.getvalue()


def responsibility(aux: AuxiliaryDrawing, method: str = "orbit") -> ResponsibilityReport:
    """Crossings on the D-edges at each D-vertex.

    ``orbit`` evaluates u_0 and vw_0 only and spreads the values over their
    rotation orbits; ``exhaustive`` evaluates every vertex.
    """
    p = aux.params
    tab = SegmentTable.from_drawing(aux)
    incident: dict[VertexId, list[int]] = {}
    for idx, e in enumerate(aux.edges):
        for v in {d_vertex(x) for x in e.endpoints}:
            incident.setdefault(v, []).append(idx)

    if method == "orbit":
        reps = [VertexId("U", 0), VertexId("VW", 0)]
    elif method == "exhaustive":
        reps = sorted(incident)
    else:
        raise ValueError(f"unknown method {method!r}")

    needed = sorted({e for v in reps for e in incident[v]})
    twice = _edge_weighted_crossings(tab, needed)
    values = {v: Fraction(sum(twice[e] for e in incident[v]), 2) for v in reps}
    if method == "orbit":
        values = {VertexId(v.cls, i): values[v] for v in reps for i in range(p.m)}
    return ResponsibilityReport(p, values, method)
