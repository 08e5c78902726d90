"""Fans of the five smooth toric del Pezzo surfaces and their lattice invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DegeneratePolytopeError, NotFoundError, ValidationError

Vec = tuple[int, int]


def det2(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _angle(v: Vec) -> float:
    a = math.atan2(v[1], v[0])
    return a if a >= 0 else a + 2 * math.pi


def sort_ccw(rays: Iterable[Vec]) -> tuple[Vec, ...]:
    """Counterclockwise order starting from the smallest angle in [0, 2pi)."""
    return tuple(sorted((tuple(int(c) for c in r) for r in rays), key=_angle))


@dataclass(frozen=True)
class Fan:
    """A complete two-dimensional fan.

    ``rays`` is the canonical counterclockwise order used for all geometric
    checks and for equality.  ``generators`` keeps the order in which the rays
    were labelled (v_1, v_2, ...); coefficient vectors of the mirror potential
    are indexed by it.
    """

    name: str
    rays: tuple[Vec, ...]
    generators: tuple[Vec, ...] = field(default=(), compare=False)

    def __post_init__(self):
        labelled = tuple(tuple(int(c) for c in r) for r in (self.generators or self.rays))
        object.__setattr__(self, "rays", sort_ccw(self.rays))
        object.__setattr__(self, "generators", labelled)
        if sorted(labelled) != sorted(self.rays):
            raise ValidationError("generators must be a relabelling of rays")

    @classmethod
    def from_rays(cls, name: str, rays: Iterable[Vec]) -> "Fan":
        rays = tuple(tuple(r) for r in rays)
        return cls(name, rays, rays)

    def to_json(self) -> dict:
        return {"name": self.name, "rays": [list(r) for r in self.generators]}

    @classmethod
    def from_json(cls, doc: dict) -> "Fan":
        return cls.from_rays(doc["name"], (tuple(r) for r in doc["rays"]))


@dataclass(frozen=True)
class Polygon:
    vertices: tuple[Vec, ...]

    def area2(self) -> int:
        vs = self.vertices
        n = len(vs)
        return sum(det2(vs[k], vs[(k + 1) % n]) for k in range(n))


# v_1..v_6 of the three-point blow-up follow the labelling used for its
# mirror potential q1 x + q2 y + q3/(xy) + q4/x + q5/y + q6 xy.
_CATALOG: dict[str, tuple[Vec, ...]] = {
    "P2": ((1, 0), (0, 1), (-1, -1)),
    "P1xP1": ((1, 0), (0, 1), (-1, 0), (0, -1)),
    "Bl1P2": ((1, 0), (1, 1), (0, 1), (-1, -1)),
    "Bl2P2": ((1, 0), (1, 1), (0, 1), (-1, -1), (0, -1)),
    "Bl3P2": ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1)),
}

SURFACES: tuple[str, ...] = tuple(_CATALOG)


def load_surface(name: str) -> Fan:
    try:
        rays = _CATALOG[name]
    except KeyError:
        raise NotFoundError(f"unknown surface {name!r}; known: {', '.join(SURFACES)}") from None
    return Fan.from_rays(name, rays)


@dataclass
class FanReport:
    name: str
    primitive: bool
    distinct: bool
    complete: bool
    smooth: bool
    fano: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "primitive": self.primitive,
            "distinct": self.distinct,
            "complete": self.complete,
            "smooth": self.smooth,
            "fano": self.fano,
            "failures": list(self.failures),
        }


def validate_fan(fan: Fan) -> FanReport:
    rays = fan.rays
    failures: list[str] = []

    primitive = True
    for r in rays:
        if r == (0, 0) or math.gcd(*r) != 1:
            primitive = False
            failures.append(f"ray {list(r)} is not primitive")

    distinct = len(set(rays)) == len(rays)
    if not distinct:
        failures.append("rays are not pairwise distinct")

    n = len(rays)
    dets = [det2(rays[k], rays[(k + 1) % n]) for k in range(n)] if n else []
    complete = n >= 3 and all(d > 0 for d in dets)
    if not complete:
        failures.append("fan is not complete: some cyclic gap between adjacent rays is >= pi")

    smooth = complete and all(d == 1 for d in dets)
    if complete and not smooth:
        bad = [k for k, d in enumerate(dets) if d != 1]
        failures.append(f"fan is not smooth: adjacent determinants {[dets[k] for k in bad]}")

    # Fano: origin strictly inside the hull and every ray an extreme point.
    fano = complete
    if complete:
        for k in range(n):
            a, b, c = rays[k - 1], rays[k], rays[(k + 1) % n]
            if det2((b[0] - a[0], b[1] - a[1]), (c[0] - b[0], c[1] - b[1])) <= 0:
                fano = False
                failures.append(f"ray {list(b)} is not a vertex of the convex hull (not Fano)")
    return FanReport(fan.name, primitive, distinct, complete, smooth, fano, failures)


def convex_hull(points: Iterable[Vec]) -> Polygon:
    pts = sorted(set(tuple(p) for p in points))
    if len(pts) < 3:
        raise DegeneratePolytopeError("need at least three non-collinear points")

    def half(seq):
        out: list[Vec] = []
        for p in seq:
            while len(out) >= 2 and det2(
                (out[-1][0] - out[-2][0], out[-1][1] - out[-2][1]),
                (p[0] - out[-1][0], p[1] - out[-1][1]),
            ) <= 0:
                out.pop()
            out.append(p)
        return out

    lower, upper = half(pts), half(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegeneratePolytopeError("points are collinear")
    return Polygon(tuple(hull))


def newton_polytope(fan: Fan) -> Polygon:
    return convex_hull(fan.rays)


def normalized_volume(poly: Polygon) -> int:
    """Twice the Euclidean area; an integer for lattice polygons."""
    return abs(poly.area2())


def euler_characteristic(fan: Fan) -> int:
    report = validate_fan(fan)
    if not (report.primitive and report.distinct and report.complete and report.smooth):
        raise ValidationError("; ".join(report.failures))
    return len(fan.rays)
