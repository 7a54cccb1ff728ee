"""Edge sets of the auxiliary plane model A and of the projective drawing D.

The auxiliary model lives on three concentric circles W, V, U carrying
m = 4k+1 vertices each.  D is obtained by identifying w_i with v_i; the
identification is kept as bookkeeping only (which A-edges make up which
D-edge), never as geometry.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator

from .core import Params, VertexId, angle_of, cyclic_distance

COLORS = ("green", "red", "brown", "blue", "black")
SCHEMA_DRAWING = "projcross-drawing/1"


class ConstructionError(RuntimeError):
    """The builder produced something that is not K_n; always a bug."""


@dataclass(frozen=True)
class AuxEdge:
    color: str
    endpoints: tuple[VertexId, VertexId]
    # forward offset (j - i) mod m from the first endpoint to the second
    offset: int

    def sort_key(self) -> tuple:
        first = self.endpoints[0]
        return (COLORS.index(self.color), first.cls, first.index, self.offset)

    def __str__(self) -> str:
        return f"{self.color}:{self.endpoints[0]}-{self.endpoints[1]}"


@dataclass(frozen=True)
class AuxiliaryDrawing:
    params: Params
    edges: tuple[AuxEdge, ...]

    def by_color(self) -> dict[str, list[AuxEdge]]:
        out: dict[str, list[AuxEdge]] = {c: [] for c in COLORS}
        for e in self.edges:
            out[e.color].append(e)
        return out

    def color_counts(self) -> dict[str, int]:
        counts = Counter(e.color for e in self.edges)
        return {c: counts.get(c, 0) for c in COLORS}

    def vertices(self) -> list[VertexId]:
        m = self.params.m
        return [VertexId(c, i) for c in ("W", "V", "U") for i in range(m)]

    def degrees(self) -> Counter:
        deg: Counter = Counter()
        for e in self.edges:
            deg[e.endpoints[0]] += 1
            deg[e.endpoints[1]] += 1
        return deg

    def to_json(self) -> dict:
        p = self.params
        return {
            "schema": SCHEMA_DRAWING,
            "kind": "auxiliary",
            "params": p.as_dict(),
            "vertices": [
                {"id": str(v), "class": v.cls, "index": v.index, "angle": angle_of(v, p)}
                for v in self.vertices()
            ],
            "edges": [
                {"color": e.color, "endpoints": [str(e.endpoints[0]), str(e.endpoints[1])]}
                for e in self.edges
            ],
        }


def expected_color_counts(p: Params) -> dict[str, int]:
    m, k, a, b = p.m, p.k, p.a, p.b
    return {
        "green": m * (2 * a + 1),
        "red": m * b,
        "brown": 2 * m * (2 * k - a),
        "blue": 2 * m * (2 * k - b),
        "black": m * (m - 1) // 2,
    }


def _generate(p: Params) -> Iterator[AuxEdge]:
    m, k, a, b = p.m, p.k, p.a, p.b
    for i in range(m):
        v_i, w_i, u_i = VertexId("V", i), VertexId("W", i), VertexId("U", i)
        # green: the 2a+1 u-vertices nearest v_i
        for s in range(-a, a + 1):
            yield AuxEdge("green", (v_i, VertexId("U", (i + s) % m)), s % m)
        # red: each pair at cyclic distance <= b once, oriented forward
        for s in range(1, b + 1):
            yield AuxEdge("red", (v_i, VertexId("V", (i + s) % m)), s)
        # brown/blue: exact complements of green/red offsets
        for d in range(a + 1, 4 * k - a + 1):
            yield AuxEdge("brown", (w_i, VertexId("U", (i + d) % m)), d)
        for d in range(b + 1, 4 * k - b + 1):
            yield AuxEdge("blue", (w_i, VertexId("V", (i + d) % m)), d)
        for j in range(i + 1, m):
            yield AuxEdge("black", (u_i, VertexId("U", j)), j - i)


def build_auxiliary(p: Params) -> AuxiliaryDrawing:
    edges = tuple(sorted(_generate(p), key=AuxEdge.sort_key))
    return AuxiliaryDrawing(p, edges)


# ---------------------------------------------------------------------------
# projective drawing D


def d_vertex(v: VertexId) -> VertexId:
    """Image of an auxiliary vertex in D (w_i and v_i both become vw_i)."""
    return v if v.cls == "U" else VertexId("VW", v.index)


def d_endpoints(e: AuxEdge) -> frozenset[VertexId]:
    return frozenset(d_vertex(v) for v in e.endpoints)


@dataclass(frozen=True)
class DEdge:
    color: str
    endpoints: tuple[VertexId, VertexId]
    sources: tuple[AuxEdge, ...]


@dataclass
class ProjectiveAdjacency:
    params: Params
    edges: dict[frozenset, DEdge] = field(default_factory=dict)

    def vertices(self) -> list[VertexId]:
        m = self.params.m
        return [VertexId("U", i) for i in range(m)] + [VertexId("VW", i) for i in range(m)]

    def color_counts(self) -> dict[str, int]:
        counts = Counter(e.color for e in self.edges.values())
        return {c: counts.get(c, 0) for c in COLORS}

    def degrees(self) -> Counter:
        deg: Counter = Counter()
        for pair in self.edges:
            for v in pair:
                deg[v] += 1
        return deg

    def blue_pairs(self) -> list[tuple[AuxEdge, AuxEdge]]:
        return [e.sources for e in self.edges.values() if e.color == "blue"]

    def expected_color(self, x: VertexId, y: VertexId) -> str:
        """Color the construction rules assign to the D-pair {x, y}."""
        p = self.params
        dist = cyclic_distance(x.index, y.index, p.m)
        if x.cls == "U" and y.cls == "U":
            return "black"
        if x.cls == "VW" and y.cls == "VW":
            return "red" if dist <= p.b else "blue"
        return "green" if dist <= p.a else "brown"

    def is_complete(self) -> bool:
        n = self.params.n
        if len(self.edges) != n * (n - 1) // 2:
            return False
        return all(d == n - 1 for d in self.degrees().values()) and len(self.degrees()) == n

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA_DRAWING,
            "kind": "projective",
            "params": self.params.as_dict(),
            "vertices": [{"id": str(v), "class": v.cls, "index": v.index} for v in self.vertices()],
            "edges": [
                {
                    "color": e.color,
                    "endpoints": [str(e.endpoints[0]), str(e.endpoints[1])],
                    "sources": [str(s) for s in e.sources],
                }
                for e in sorted(self.edges.values(), key=lambda e: (COLORS.index(e.color), e.endpoints))
            ],
        }


def project(aux: AuxiliaryDrawing) -> ProjectiveAdjacency:
    groups: dict[frozenset, list[AuxEdge]] = {}
    for e in aux.edges:
        ends = d_endpoints(e)
        if len(ends) != 2:
            raise ConstructionError(f"{e} becomes a loop in D")
        groups.setdefault(ends, []).append(e)

    adj = ProjectiveAdjacency(aux.params)
    for ends, sources in groups.items():
        colors = {s.color for s in sources}
        if len(colors) != 1:
            raise ConstructionError(f"pair {sorted(ends)} covered by colors {sorted(colors)}")
        color = colors.pop()
        need = 2 if color == "blue" else 1
        if len(sources) != need:
            raise ConstructionError(
                f"pair {sorted(ends)} covered by {len(sources)} {color} edges, expected {need}"
            )
        if color == "blue":
            # w_i v_j must be paired with w_j v_i
            (x, y), (x2, y2) = (s.endpoints for s in sources)
            if (x.index, y.index) != (y2.index, x2.index):
                raise ConstructionError(f"blue copies {sources} are not mirror images")
        x, y = sorted(ends)
        adj.edges[ends] = DEdge(color, (x, y), tuple(sources))

    n = aux.params.n
    if len(adj.edges) != n * (n - 1) // 2:
        missing = n * (n - 1) // 2 - len(adj.edges)
        raise ConstructionError(f"D is missing {missing} vertex pairs")
    return adj

