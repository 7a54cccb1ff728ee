"""SVG pictures of the auxiliary model on three concentric circles.

The picture is illustrative only: spanners are drawn along their taut polar
route, red chords as shallow arcs just inside V.  Counts shown in the legend
come from the crossing engine, not from the picture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from xml.sax.saxutils import escape

from .core import Params, VertexId, angle_of, polygon_order
from .drawing import COLORS, AuxEdge, AuxiliaryDrawing
from .engine import CrossingBreakdown, decompose

PALETTE = {
    "green": "#2ca02c",
    "red": "#d62728",
    "brown": "#8c564b",
    "blue": "#1f77b4",
    "black": "#000000",
}


@dataclass
class RenderConfig:
    radius_w: float = 270.0
    radius_v: float = 180.0
    radius_u: float = 90.0
    size: int = 640
    edge_width: float = 0.8
    polygon_width: float = 3.0
    vertex_radius: float = 3.5
    palette: dict[str, str] = field(default_factory=lambda: dict(PALETTE))
    colors: frozenset[str] | None = None
    vertices: frozenset[VertexId] | None = None
    polygon: bool = False
    labels: bool = False

    def __post_init__(self) -> None:
        if not self.radius_w > self.radius_v > self.radius_u > 0:
            raise ValueError("radii must satisfy W > V > U > 0")

    def keep(self, e: AuxEdge) -> bool:
        if self.colors is not None and e.color not in self.colors:
            return False
        if self.vertices is not None and not set(e.endpoints) & self.vertices:
            return False
        return True


def _radius(cls: str, cfg: RenderConfig) -> float:
    return {"W": cfg.radius_w, "V": cfg.radius_v, "U": cfg.radius_u}[cls]


def _point(units: float, radius: float, p: Params, cfg: RenderConfig) -> tuple[float, float]:
    # clockwise on screen, angle 0 at the bottom
    phi = math.pi * units / p.m
    c = cfg.size / 2
    return c - radius * math.sin(phi), c + radius * math.cos(phi)


def _fmt(pt: tuple[float, float]) -> str:
    return f"{pt[0]:.2f},{pt[1]:.2f}"


def _polar_path(x: int, delta: int, r0: float, r1: float, p: Params, cfg: RenderConfig, steps: int = 12) -> list:
    return [
        _point(x + delta * t / steps, r0 + (r1 - r0) * t / steps, p, cfg)
        for t in range(steps + 1)
    ]


def _edge_points(e: AuxEdge, p: Params, cfg: RenderConfig) -> list[tuple[float, float]]:
    segs = decompose(e, p)
    rv, ru, rw = cfg.radius_v, cfg.radius_u, cfg.radius_w
    if e.color == "black":
        return [_point(segs[0].x, ru, p, cfg), _point(segs[0].x + segs[0].delta, ru, p, cfg)]
    if e.color == "red":
        s = segs[0]
        depth = (rv - ru) * min(0.35, 0.08 + 0.6 * abs(s.delta) / (2 * p.m))
        pts = []
        steps = 12
        for t in range(steps + 1):
            bulge = depth * math.sin(math.pi * t / steps)
            pts.append(_point(s.x + s.delta * t / steps, rv - bulge, p, cfg))
        return pts
    if e.color == "green":
        s = segs[0]
        return _polar_path(s.x, s.delta, rv, ru, p, cfg)
    if e.color == "blue":
        s = segs[0]
        return _polar_path(s.x, s.delta, rw, rv, p, cfg)
    radial, inner = segs
    return [_point(radial.x, rw, p, cfg)] + _polar_path(inner.x, inner.delta, rv, ru, p, cfg)


def render_auxiliary(aux: AuxiliaryDrawing, cfg: RenderConfig | None = None,
                     counts: CrossingBreakdown | None = None) -> str:
    cfg = cfg or RenderConfig()
    p = aux.params
    c = cfg.size / 2
    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{cfg.size}" '
        f'height="{cfg.size}" viewBox="0 0 {cfg.size} {cfg.size}">',
        f"<title>{escape(f'A(alpha={p.alpha}, beta={p.beta}, n={p.n})')}</title>",
        '<g class="rings" fill="none" stroke="#bbbbbb" stroke-width="0.6">',
    ]
    for name, r in (("W", cfg.radius_w), ("V", cfg.radius_v), ("U", cfg.radius_u)):
        out.append(f'<circle class="ring" id="ring-{name}" cx="{c}" cy="{c}" r="{r}"/>')
    out.append("</g>")

    out.append(f'<g class="edges" fill="none" stroke-width="{cfg.edge_width}">')
    for color in reversed(COLORS):
        for e in aux.edges:
            if e.color != color or not cfg.keep(e):
                continue
            pts = _edge_points(e, p, cfg)
            d = "M" + " L".join(_fmt(pt) for pt in pts)
            out.append(
                f'<path class="edge {color}" data-edge="{escape(str(e))}" '
                f'stroke="{cfg.palette[color]}" d="{d}"/>'
            )
    out.append("</g>")

    if cfg.polygon:
        corners = [_point(angle_of(v, p), _radius(v.cls, cfg), p, cfg) for v in polygon_order(p)]
        out.append(
            f'<polygon class="polygon" fill="none" stroke="{cfg.palette["blue"]}" '
            f'stroke-width="{cfg.polygon_width}" points="{" ".join(_fmt(pt) for pt in corners)}"/>'
        )

    out.append('<g class="vertices">')
    for v in aux.vertices():
        x, y = _point(angle_of(v, p), _radius(v.cls, cfg), p, cfg)
        out.append(
            f'<circle class="vertex {v.cls}" id="{v}" cx="{x:.2f}" cy="{y:.2f}" '
            f'r="{cfg.vertex_radius}" fill="white" stroke="black"/>'
        )
        if cfg.labels:
            out.append(f'<text x="{x + 5:.2f}" y="{y - 5:.2f}" font-size="9">{v}</text>')
    out.append("</g>")

    if counts is not None:
        lines = [f"crossings A={counts.total_a} D={counts.total_d}"]
        lines += [f"{t}: {v}" for t, v in counts.counts_a.items() if v]
        out.append('<g class="legend" font-family="monospace" font-size="10">')
        for i, line in enumerate(lines):
            out.append(f'<text x="8" y="{14 + 12 * i}">{escape(line)}</text>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
