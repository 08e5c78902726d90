"""Deterministic SVG figures: torus configurations and branch-point trajectories.

Every coordinate is written with six decimals, and elements are emitted in
a fixed order, so equal inputs give byte-identical documents.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence
from xml.sax.saxutils import escape

from .exceptional import PRETTY
from .potential import BranchTrajectory
from .torus import Point, TorusConfig, TorusLine

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2")


@dataclass(frozen=True)
class RenderSpec:
    size: int = 480  # canvas width and height in pixels
    margin: int = 24  # gap between the canvas edge and the fundamental domain
    colors: tuple[int, ...] = ()  # palette index per cycle; empty = cycle order
    line_width: float = 2.0
    dot_radius: float = 4.0
    puncture_radius: float = 5.0
    label_offset: tuple[float, float] = (5.0, -5.0)  # pixels, relative to the point
    font_size: int = 11

    def color(self, c: int) -> str:
        k = self.colors[c] if c < len(self.colors) else c
        return PALETTE[k % len(PALETTE)]


def _f(v: float) -> str:
    s = f"{v:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def wrapped_segments(line: TorusLine) -> list[tuple[Point, Point]]:
    """The closed geodesic cut into straight pieces inside the unit square."""
    bx, by = line.point()
    a, b = line.hclass
    cuts = {Fraction(0), Fraction(1)}
    for start, step in ((bx, a), (by, b)):
        if step == 0:
            continue
        lo, hi = sorted((start, start + step))
        for k in range(_floor(lo), _floor(hi) + 2):
            t = (k - start) / step
            if 0 < t < 1:
                cuts.add(t)
    ts = sorted(cuts)
    out = []
    for t0, t1 in zip(ts, ts[1:]):
        mid = (t0 + t1) / 2
        sx, sy = _floor(bx + mid * a), _floor(by + mid * b)
        p0 = (bx + t0 * a - sx, by + t0 * b - sy)
        p1 = (bx + t1 * a - sx, by + t1 * b - sy)
        out.append((p0, p1))
    return out


class _Frame:
    def __init__(self, spec: RenderSpec):
        self.spec = spec
        self.side = spec.size - 2 * spec.margin

    def xy(self, p) -> tuple[str, str]:
        x = self.spec.margin + float(p[0]) * self.side
        y = self.spec.margin + (1 - float(p[1])) * self.side
        return _f(x), _f(y)


def _header(size: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect class="background" x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
    ]


def _pretty(label: str, sign: int) -> str:
    text = PRETTY.get(label, label)
    return ("−" if sign < 0 else "") + text


def render_torus(cfg: TorusConfig, spec: RenderSpec = RenderSpec(),
                 labels: dict[tuple[int, int], Sequence[tuple[Point, str, int]]] | None = None) -> str:
    """Square fundamental domain with cycles, punctures (open) and dots (filled).

    ``labels`` maps a 1-based hom pair to (point, label, sign) triples, as
    produced from a certificate; those points are marked and annotated.
    """
    fr = _Frame(spec)
    m = spec.margin
    lines = _header(spec.size)
    lines.append(
        f'<rect class="domain" x="{_f(m)}" y="{_f(m)}" width="{_f(fr.side)}" height="{_f(fr.side)}" '
        'fill="none" stroke="#000000" stroke-width="1.000000"/>'
    )
    for c, line in enumerate(cfg.cycles):
        d = " ".join(
            "M {} {} L {} {}".format(*fr.xy(p0), *fr.xy(p1)) for p0, p1 in wrapped_segments(line)
        )
        lines.append(
            f'<path class="cycle" data-cycle="{c + 1}" d="{d}" fill="none" '
            f'stroke="{spec.color(c)}" stroke-width="{_f(spec.line_width)}"/>'
        )
    for c, ds in enumerate(cfg.dots):
        for p in ds:
            x, y = fr.xy(p)
            lines.append(
                f'<circle class="dot" data-cycle="{c + 1}" cx="{x}" cy="{y}" r="{_f(spec.dot_radius)}" '
                'fill="#000000"/>'
            )
    for p in cfg.punctures:
        x, y = fr.xy(p)
        lines.append(
            f'<circle class="puncture" cx="{x}" cy="{y}" r="{_f(spec.puncture_radius)}" '
            'fill="#ffffff" stroke="#000000" stroke-width="1.500000"/>'
        )
    for pair in sorted(labels or {}):
        for p, label, sign in labels[pair]:
            x, y = fr.xy(p)
            tx = _f(float(x) + spec.label_offset[0])
            ty = _f(float(y) + spec.label_offset[1])
            lines.append(f'<rect class="point" x="{_f(float(x) - 2)}" y="{_f(float(y) - 2)}" '
                         'width="4.000000" height="4.000000" fill="#555555"/>')
            lines.append(
                f'<text class="label" data-pair="{pair[0]},{pair[1]}" x="{tx}" y="{ty}" '
                f'font-size="{spec.font_size}" font-family="serif">{escape(_pretty(label, sign))}</text>'
            )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def certificate_labels(points: dict[tuple[int, int], Sequence[Point]],
                       maps: dict[tuple[int, int], Sequence[tuple[str, int]]]):
    """Join the intersection points of a presentation with certificate images."""
    return {
        pair: [(p, lab, s) for p, (lab, s) in zip(points[pair], maps[pair])]
        for pair in sorted(maps)
        if pair in points
    }


def render_trajectory(traj: BranchTrajectory, spec: RenderSpec = RenderSpec(), title: str = "") -> str:
    """The four branch points in the y-plane as t runs over [0, 1].

    Hollow markers sit at t = 0, filled ones at t = 1.
    """
    roots = [[complex(z) for z in r] for _, r in traj.samples]
    xs = [z.real for r in roots for z in r]
    ys = [z.imag for r in roots for z in r]
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    half = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9) / 2 * 1.08
    side = spec.size - 2 * spec.margin

    def xy(z: complex) -> tuple[str, str]:
        x = spec.margin + (z.real - cx + half) / (2 * half) * side
        y = spec.margin + (1 - (z.imag - cy + half) / (2 * half)) * side
        return _f(x), _f(y)

    lines = _header(spec.size)
    m = spec.margin
    lines.append(
        f'<rect class="frame" x="{_f(m)}" y="{_f(m)}" width="{_f(side)}" height="{_f(side)}" '
        'fill="none" stroke="#888888" stroke-width="1.000000"/>'
    )
    # the origin, where the fibre's projection is undefined, if it is in view
    if abs(cx) <= half and abs(cy) <= half:
        ox, oy = xy(0j)
        lines.append(f'<path class="origin" d="M {_f(float(ox) - 4)} {oy} L {_f(float(ox) + 4)} {oy} '
                     f'M {ox} {_f(float(oy) - 4)} L {ox} {_f(float(oy) + 4)}" stroke="#888888"/>')
    for k in range(len(roots[0])):
        pts = " ".join("{},{}".format(*xy(r[k])) for r in roots)
        lines.append(
            f'<polyline class="root" data-root="{k}" points="{pts}" fill="none" '
            f'stroke="{spec.color(k)}" stroke-width="{_f(spec.line_width / 2)}"/>'
        )
    for k, z in enumerate(roots[0]):
        x, y = xy(z)
        lines.append(f'<circle class="start" data-root="{k}" cx="{x}" cy="{y}" r="{_f(spec.dot_radius)}" '
                     f'fill="#ffffff" stroke="{spec.color(k)}"/>')
    for k, z in enumerate(roots[-1]):
        x, y = xy(z)
        lines.append(f'<circle class="end" data-root="{k}" cx="{x}" cy="{y}" r="{_f(spec.dot_radius)}" '
                     f'fill="{spec.color(k)}"/>')
    if title:
        lines.append(f'<text class="title" x="{_f(m)}" y="{_f(m - 8)}" font-size="{spec.font_size}" '
                     f'font-family="sans-serif">{escape(title)}</text>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def svg_counts(svg: str) -> dict[str, int]:
    """Element counts by class, for quick structural checks."""
    out = {}
    for cls in ("cycle", "dot", "puncture", "label", "root"):
        out[cls] = svg.count(f'class="{cls}"')
    return out

