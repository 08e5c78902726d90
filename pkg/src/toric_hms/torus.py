"""Straight cycles on the flat torus R^2/Z^2 with exact rational arithmetic.

A cycle of primitive class (a, b) and offset c is the closed geodesic
``b*x - a*y = c (mod 1)``.  Triangles are enumerated in the universal cover;
their boundary runs counterclockwise with edge l on a lift of cycle i_l,
vertices ordered (p0, p1, p2) with p1 = C_i0 & C_i1, p2 = C_i1 & C_i2 and
p0 = C_i0 & C_i2 the output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    EnumerationUnboundedError,
    GradingMarginError,
    InvalidConfigError,
    ParallelLinesError,
    UndefinedIndexError,
)

Point = tuple[Fraction, Fraction]
Vec = tuple[int, int]

GRADING_MARGIN = 1e-9


def det2(u: Sequence, v: Sequence):
    return u[0] * v[1] - u[1] * v[0]


def _floor(q: Fraction) -> int:
    return q.numerator // q.denominator


def _frac(q: Fraction) -> Fraction:
    return q - _floor(q)


def reduce_point(p: Sequence) -> Point:
    return (_frac(Fraction(p[0])), _frac(Fraction(p[1])))


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a - (a // b) * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def complement(d: Vec) -> Vec:
    """An integer vector e with det(d, e) = 1."""
    a, b = d
    g, x, y = _xgcd(a, b)
    if abs(g) != 1:
        raise ValueError(f"class {d} is not primitive")
    # a*x + b*y = g; det((a, b), (-y, x)) = a*x + b*y
    return (-y * g, x * g)


def canonical_class(a: int, b: int) -> Vec:
    if b < 0 or (b == 0 and a < 0):
        return (-a, -b)
    return (a, b)


@dataclass(frozen=True)
class TorusLine:
    hclass: Vec
    offset: Fraction = Fraction(0)

    def __post_init__(self):
        a, b = (int(c) for c in self.hclass)
        if (a, b) == (0, 0) or math.gcd(a, b) != 1:
            raise ValueError(f"homology class {(a, b)} is not primitive")
        c = Fraction(self.offset)
        if canonical_class(a, b) != (a, b):
            a, b, c = -a, -b, -c
        object.__setattr__(self, "hclass", (a, b))
        object.__setattr__(self, "offset", _frac(c))

    def level(self, p: Sequence) -> Fraction:
        a, b = self.hclass
        return b * Fraction(p[0]) - a * Fraction(p[1]) - self.offset

    def contains(self, p: Sequence) -> bool:
        return self.level(p).denominator == 1

    @property
    def phase(self) -> float:
        """Angle of the class divided by pi, in [0, 1)."""
        a, b = self.hclass
        return math.atan2(b, a) / math.pi

    def point(self) -> Point:
        """Some point of the cycle inside [0, 1)^2."""
        a, b = self.hclass
        e = complement((a, b))
        # b*x - a*y = det(point, (a, b)) = -det((a, b), point); take point = -c*e
        return reduce_point((-self.offset * e[0], -self.offset * e[1]))

    def translated(self, t: Sequence) -> "TorusLine":
        a, b = self.hclass
        return TorusLine((a, b), self.offset + b * Fraction(t[0]) - a * Fraction(t[1]))


def intersections(l1: TorusLine, l2: TorusLine) -> list[Point]:
    """All |det| intersection points of two transverse cycles, lex sorted."""
    (a1, b1), (a2, b2) = l1.hclass, l2.hclass
    d = a1 * b2 - a2 * b1
    if d == 0:
        raise ParallelLinesError(f"classes {l1.hclass} and {l2.hclass} are parallel")
    # [[b1, -a1], [b2, -a2]] (x, y) = (c1 + n1, c2 + n2); the matrix has det d
    pts = set()
    n = abs(d)
    for n1 in range(n):
        for n2 in range(n):
            r1, r2 = l1.offset + n1, l2.offset + n2
            x = (a1 * r2 - a2 * r1) / d
            y = (b1 * r2 - b2 * r1) / d
            pts.add(reduce_point((x, y)))
    out = sorted(pts)
    assert len(out) == n
    return out


def line_parameter(base: Point, d: Vec, p: Sequence) -> Fraction:
    """t in [0, 1) with base + t*d = p (mod Z^2); p must lie on that cycle."""
    e = complement(d)
    w = (Fraction(p[0]) - base[0], Fraction(p[1]) - base[1])
    if det2(d, w).denominator != 1:
        raise ValueError("point does not lie on the cycle through base")
    return _frac(det2(w, e))


@dataclass(frozen=True)
class TorusConfig:
    cycles: tuple[TorusLine, ...]
    punctures: tuple[Point, ...] = ()
    dots: tuple[tuple[Point, ...], ...] = ()
    lifts: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        object.__setattr__(self, "punctures", tuple(reduce_point(p) for p in self.punctures))
        dots = tuple(tuple(reduce_point(p) for p in ds) for ds in self.dots)
        if not dots:
            dots = tuple(() for _ in self.cycles)
        object.__setattr__(self, "dots", dots)
        if self.lifts is not None:
            object.__setattr__(self, "lifts", tuple(float(v) for v in self.lifts))

    @property
    def n(self) -> int:
        return len(self.cycles)

    def hom_points(self, i: int, j: int) -> list[Point]:
        """Intersection basis of hom(i, j), 0-based cycle indices, empty if parallel."""
        ci, cj = self.cycles[i], self.cycles[j]
        if det2(ci.hclass, cj.hclass) == 0:
            return []
        return intersections(ci, cj)

    def with_lifts(self, lifts: Sequence[float]) -> "TorusConfig":
        return TorusConfig(self.cycles, self.punctures, self.dots, tuple(lifts))

    # JSON: rationals as exact strings
    def to_json(self) -> dict:
        doc = {
            "cycles": [
                {
                    "class": list(c.hclass),
                    "offset": str(c.offset),
                    "dots": [format_point(p) for p in ds],
                }
                for c, ds in zip(self.cycles, self.dots)
            ],
            "punctures": [format_point(p) for p in self.punctures],
        }
        if self.lifts is not None:
            doc["lifts"] = list(self.lifts)
        return doc

    @classmethod
    def from_json(cls, doc: dict) -> "TorusConfig":
        cycles, dots = [], []
        for c in doc["cycles"]:
            cycles.append(TorusLine(tuple(c["class"]), Fraction(c.get("offset", "0"))))
            dots.append(tuple(parse_point(s) for s in c.get("dots", [])))
        lifts = doc.get("lifts")
        return cls(
            tuple(cycles),
            tuple(parse_point(s) for s in doc.get("punctures", [])),
            tuple(dots),
            tuple(lifts) if lifts is not None else None,
        )


def format_point(p: Point) -> str:
    return f"({p[0]},{p[1]})"


def parse_point(s: str) -> Point:
    if not isinstance(s, str):
        raise ValueError(f"bad point literal {s!r}")
    body = s.strip()
    if not (body.startswith("(") and body.endswith(")")):
        raise ValueError(f"bad point literal {s!r}")
    x, y = body[1:-1].split(",")
    return (Fraction(x.strip()), Fraction(y.strip()))


# -- validation ---------------------------------------------------------------


@dataclass
class ConfigReport:
    failures: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, kind: str, message: str, **where):
        self.failures.append({"kind": kind, "message": message, **where})

    def to_json(self) -> dict:
        return {"ok": self.ok, "failures": list(self.failures)}


def validate_config(cfg: TorusConfig) -> ConfigReport:
    rep = ConfigReport()
    if len(cfg.dots) != cfg.n:
        rep.add("shape", f"{len(cfg.dots)} dot lists for {cfg.n} cycles")
        return rep
    for k, p in enumerate(cfg.punctures):
        for i, c in enumerate(cfg.cycles):
            if c.contains(p):
                rep.add("puncture_on_cycle", f"puncture {format_point(p)} lies on cycle {i + 1}",
                        puncture=k, cycle=i + 1)
    crossings: list[set[Point]] = [set() for _ in cfg.cycles]
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            ci, cj = cfg.cycles[i], cfg.cycles[j]
            if det2(ci.hclass, cj.hclass) == 0:
                if ci.offset == cj.offset:
                    rep.add("coincident", f"parallel cycles {i + 1} and {j + 1} coincide",
                            cycle=i + 1, other=j + 1)
                continue
            pts = intersections(ci, cj)
            crossings[i].update(pts)
            crossings[j].update(pts)
    for i, (c, ds) in enumerate(zip(cfg.cycles, cfg.dots)):
        if len(ds) % 2 == 0:
            rep.add("spin", f"cycle {i + 1} carries {len(ds)} dots; the spin structure needs an odd number",
                    cycle=i + 1)
        if len(set(ds)) != len(ds):
            rep.add("dot_repeated", f"cycle {i + 1} has repeated dots", cycle=i + 1)
        for p in ds:
            if not c.contains(p):
                rep.add("dot_off_cycle", f"dot {format_point(p)} is not on cycle {i + 1}", cycle=i + 1)
            elif p in crossings[i]:
                rep.add("dot_on_crossing", f"dot {format_point(p)} sits on a crossing of cycle {i + 1}",
                        cycle=i + 1)
    if cfg.lifts is not None:
        if len(cfg.lifts) != cfg.n:
            rep.add("lifts", f"{len(cfg.lifts)} grading lifts for {cfg.n} cycles")
        else:
            for i, (c, v) in enumerate(zip(cfg.cycles, cfg.lifts)):
                r = (v - c.phase) % 1.0
                if min(r, 1.0 - r) > 1e-9:
                    rep.add("lift_phase", f"lift {v} of cycle {i + 1} is not congruent to its phase {c.phase}",
                            cycle=i + 1)
    return rep


# -- gradings and Maslov indices ------------------------------------------------


@dataclass
class GradingResult:
    feasible: bool
    lifts: tuple[float, ...] | None
    witness: tuple | None = None


def grading_lifts(classes: TorusConfig | Sequence[Vec]) -> GradingResult:
    """Phase lifts with lift_j - lift_i in (-1, 0) for every transverse i < j.

    For a transverse pair the open unit interval contains exactly one
    admissible integer shift, so lifts are forced once the first is fixed at
    its phase; feasibility is then a consistency check over all pairs.
    """
    if isinstance(classes, TorusConfig):
        classes = [c.hclass for c in classes.cycles]
    phases = [math.atan2(b, a) / math.pi % 1.0 for a, b in (canonical_class(*c) for c in classes)]
    n = len(phases)
    if n == 0:
        return GradingResult(True, ())

    def forced_shift(i, j):
        if det2(classes[i], classes[j]) == 0:
            return 0
        return -1 if phases[j] > phases[i] else 0

    shifts = [0] + [forced_shift(0, j) for j in range(1, n)]
    lifts = tuple(phases[k] + shifts[k] for k in range(n))
    for i in range(1, n):
        for j in range(i + 1, n):
            if det2(classes[i], classes[j]) == 0:
                ok = lifts[i] == lifts[j]
            else:
                diff = lifts[j] - lifts[i]
                ok = -1.0 < diff < 0.0
            if not ok:
                return GradingResult(False, None, ((1, i + 1), (1, j + 1), (i + 1, j + 1)))
    return GradingResult(True, lifts)


def maslov_index(lift_i: float, lift_j: float, margin: float = GRADING_MARGIN) -> int:
    """Degree of an intersection point viewed in hom(C_i, C_j)."""
    diff = lift_j - lift_i
    nearest = round(diff)
    if abs(diff - nearest) <= margin:
        if nearest == 0 or abs(diff) <= margin:
            raise UndefinedIndexError("parallel cycles have no Maslov index")
        raise GradingMarginError(f"phase difference {diff} within {margin} of an integer")
    return math.floor(diff) + 1


def config_lifts(cfg: TorusConfig) -> tuple[float, ...]:
    if cfg.lifts is not None:
        return cfg.lifts
    g = grading_lifts(cfg)
    if not g.feasible:
        raise InvalidConfigError(f"no feasible grading; violated chain {g.witness}")
    return g.lifts


# -- covering radius -------------------------------------------------------------


def covering_radius_bound(punctures: Sequence[Point], grid: int = 48) -> float:
    """Upper bound on the largest distance from a plane point to a puncture lift."""
    if not punctures:
        return math.inf
    naive = math.sqrt(0.5)
    pts = np.array([[float(x), float(y)] for x, y in punctures])
    shifts = np.array([(i, j) for i in (-1, 0, 1) for j in (-1, 0, 1)], dtype=float)
    lifts = (pts[:, None, :] + shifts[None, :, :]).reshape(-1, 2)
    centers = (np.arange(grid) + 0.5) / grid
    cx, cy = np.meshgrid(centers, centers)
    c = np.stack([cx.ravel(), cy.ravel()], axis=1)
    dist = np.sqrt(((c[:, None, :] - lifts[None, :, :]) ** 2).sum(axis=2)).min(axis=1)
    # every plane point is within half a cell diagonal of some center; float slack added
    bound = float(dist.max()) + math.sqrt(0.5) / grid + 1e-9
    return min(bound, naive + 1e-12)


# -- triangles -------------------------------------------------------------------


@dataclass(frozen=True)
class TrianglePatch:
    cycles: tuple[int, int, int]
    vertices: tuple[Point, Point, Point]  # lifted (p0, p1, p2), counterclockwise
    output: int  # index of p0 in the basis of hom(i0, i2)
    dot_count: int
    step: Fraction  # position of p2 along the lift of C_i1 in units of its class

    @property
    def sign(self) -> int:
        return -1 if self.dot_count % 2 else 1

    def area2(self) -> Fraction:
        (x0, y0), (x1, y1), (x2, y2) = self.vertices
        return (x1 - x0) * (y2 - y0) - (y1 - y0) * (x2 - x0)


@dataclass(frozen=True)
class EnumerationCertificate:
    covering_radius: float
    inradius_per_step: float
    max_step: float


def _inradius(p0, p1, p2) -> float:
    pts = [(float(x), float(y)) for x, y in (p0, p1, p2)]
    area = abs(det2((pts[1][0] - pts[0][0], pts[1][1] - pts[0][1]),
                    (pts[2][0] - pts[0][0], pts[2][1] - pts[0][1]))) / 2
    per = sum(math.dist(pts[k], pts[(k + 1) % 3]) for k in range(3))
    return 2 * area / per


def _orient(a, b, c) -> Fraction:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def point_in_triangle(p, tri, closed: bool = True) -> bool:
    a, b, c = tri
    s = (_orient(a, b, p), _orient(b, c, p), _orient(c, a, p))
    if closed:
        return all(v >= 0 for v in s)
    return all(v > 0 for v in s)


def lifts_in_triangle(p: Point, tri, closed: bool = True) -> int:
    """How many integer translates of p lie in the (closed or open) triangle."""
    xs = [v[0] for v in tri]
    ys = [v[1] for v in tri]
    count = 0
    for m in range(math.floor(min(xs) - p[0]), math.ceil(max(xs) - p[0]) + 1):
        for k in range(math.floor(min(ys) - p[1]), math.ceil(max(ys) - p[1]) + 1):
            if point_in_triangle((p[0] + m, p[1] + k), tri, closed):
                count += 1
    return count


def _dots_on_segment(start: Point, d: Vec, t_end: Fraction, dots: Iterable[Point]) -> int:
    """Dot lifts strictly between start and start + t_end*d on that lifted line."""
    lo, hi = (Fraction(0), t_end) if t_end > 0 else (t_end, Fraction(0))
    count = 0
    for q in dots:
        t = line_parameter(start, d, q)
        if t == 0 or _frac(t_end - t) == 0:
            raise InvalidConfigError("a dot coincides with a triangle vertex")
        # lifts sit at t + n; count lo < t + n < hi
        count += _floor(hi - t) - _floor(lo - t) - (1 if _frac(hi - t) == 0 else 0)
    return count


def triangle_sign(patch: TrianglePatch, cfg: TorusConfig) -> int:
    """(-1) to the number of dot lifts on the three open edges."""
    return -1 if count_boundary_dots(patch.vertices, patch.cycles, cfg) % 2 else 1


def count_boundary_dots(vertices, cycles: tuple[int, int, int], cfg: TorusConfig) -> int:
    p0, p1, p2 = vertices
    total = 0
    for (a, b), ci in zip(((p0, p1), (p1, p2), (p2, p0)), cycles):
        d = cfg.cycles[ci].hclass
        dx, dy = b[0] - a[0], b[1] - a[1]
        t = dx / d[0] if d[0] else dy / d[1]
        total += _dots_on_segment(a, d, t, cfg.dots[ci])
    return total


def _step_bound(cfg: TorusConfig, d0: Vec, d1: Vec, d2: Vec, radius_scale: float, rho: float | None):
    if rho is None:
        rho = covering_radius_bound(cfg.punctures)
    if not math.isfinite(rho):
        raise EnumerationUnboundedError("no punctures: infinitely many lattice translates contribute")
    # unit-step shape: p1 at origin, p2 = d1, p0 on the C_i0 line through p1
    u = Fraction(det2(d1, d2), det2(d0, d2))
    shape = _inradius((u * d0[0], u * d0[1]), (0, 0), d1)
    max_step = rho / shape * radius_scale * (1 + 1e-9) + 1e-9
    return EnumerationCertificate(rho, shape, max_step)


def enumerate_triangles(
    cfg: TorusConfig,
    triple: tuple[int, int, int],
    p1: int,
    p2: int,
    radius_scale: float = 1.0,
    rho: float | None = None,
    keep_punctured: bool = False,
) -> tuple[dict[int, list[TrianglePatch]], EnumerationCertificate]:
    """Immersed triangles with inputs p1, p2, grouped by output point index.

    ``triple`` holds 0-based cycle indices i0 < i1 < i2; p1 and p2 index the
    intersection bases of hom(i0, i1) and hom(i1, i2).  Only triangles whose
    inradius could stay below the puncture covering radius are examined; all
    larger ones provably contain a puncture lift.
    """
    i0, i1, i2 = triple
    c0, c1, c2 = (cfg.cycles[k] for k in triple)
    d0, d1, d2 = c0.hclass, c1.hclass, c2.hclass
    if det2(d0, d1) == 0 or det2(d1, d2) == 0 or det2(d0, d2) == 0:
        raise ParallelLinesError("triangle sides must be pairwise transverse")
    basis01 = intersections(c0, c1)
    basis12 = intersections(c1, c2)
    basis02 = intersections(c0, c2)
    index02 = {p: k for k, p in enumerate(basis02)}
    P1 = basis01[p1]
    cert = _step_bound(cfg, d0, d1, d2, radius_scale, rho)

    u_per_t = Fraction(det2(d1, d2), det2(d0, d2))
    t0 = line_parameter(P1, d1, basis12[p2])
    kmax = math.floor(cert.max_step) + 1
    groups: dict[int, list[TrianglePatch]] = {}
    for k in range(-kmax - 1, kmax + 1):
        t = t0 + k
        if t == 0 or abs(t) > cert.max_step:
            continue
        P2 = (P1[0] + t * d1[0], P1[1] + t * d1[1])
        u = u_per_t * t
        P0 = (P1[0] + u * d0[0], P1[1] + u * d0[1])
        tri = (P0, P1, P2)
        if _orient(*tri) <= 0:
            continue
        if not keep_punctured and any(lifts_in_triangle(q, tri) for q in cfg.punctures):
            continue
        out = index02[reduce_point(P0)]
        dots = count_boundary_dots(tri, (i0, i1, i2), cfg)
        groups.setdefault(out, []).append(TrianglePatch((i0, i1, i2), tri, out, dots, t))
    for v in groups.values():
        v.sort(key=lambda p: (abs(p.step), p.step))
    return dict(sorted(groups.items())), cert


# -- the arrangement's faces -------------------------------------------------------


@dataclass(frozen=True)
class Face:
    key: tuple[int, ...]
    representative: Point  # interior point, reduced to [0, 1)^2
    polygon: tuple[Point, ...]  # one planar lift, counterclockwise


def _cell_key(cfg: TorusConfig, p) -> tuple[int, ...]:
    return tuple(_floor(c.level(p)) for c in cfg.cycles)


def _canonical_key(cfg: TorusConfig, key: tuple[int, ...], pair: tuple[int, int]) -> tuple[int, ...]:
    # integer translation by z shifts key_l by (b_l, -a_l) . z
    i, j = pair
    (ai, bi), (aj, bj) = cfg.cycles[i].hclass, cfg.cycles[j].hclass
    m = ((bi, -ai), (bj, -aj))
    dm = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    ki, kj = key[i], key[j]
    w0 = Fraction(m[1][1] * ki - m[0][1] * kj, dm)
    w1 = Fraction(-m[1][0] * ki + m[0][0] * kj, dm)
    z = (-_floor(w0), -_floor(w1))
    return tuple(k + b * z[0] - a * z[1] for k, (a, b) in zip(key, (c.hclass for c in cfg.cycles)))


def _cell_polygon(cfg: TorusConfig, key: tuple[int, ...]) -> tuple[Point, ...]:
    # half-planes key_l <= level_l <= key_l + 1
    bounds = []
    for c, k in zip(cfg.cycles, key):
        a, b = c.hclass
        bounds.append((b, -a, c.offset + k))
        bounds.append((b, -a, c.offset + k + 1))
    verts = set()
    for s in range(len(bounds)):
        for t in range(s + 1, len(bounds)):
            (p, q, r), (p2, q2, r2) = bounds[s], bounds[t]
            dd = p * q2 - q * p2
            if dd == 0:
                continue
            x = (r * q2 - q * r2) / Fraction(dd)
            y = (p * r2 - r * p2) / Fraction(dd)
            ok = True
            for c, k in zip(cfg.cycles, key):
                lv = c.level((x, y))
                if lv < k or lv > k + 1:
                    ok = False
                    break
            if ok:
                verts.add((x, y))
    verts = list(verts)
    cx = sum(v[0] for v in verts) / len(verts)
    cy = sum(v[1] for v in verts) / len(verts)
    verts.sort(key=lambda v: math.atan2(float(v[1] - cy), float(v[0] - cx)))
    return tuple(verts)


def arrangement_faces(cfg: TorusConfig) -> list[Face]:
    """Faces of the torus minus all cycles, each with an exact interior point."""
    n = cfg.n
    pair = next(((i, j) for i in range(n) for j in range(i + 1, n)
                 if det2(cfg.cycles[i].hclass, cfg.cycles[j].hclass) != 0), None)
    if pair is None:
        raise InvalidConfigError("faces need at least two transverse cycles")
    seen: dict[tuple[int, ...], tuple[int, ...]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            di, dj = cfg.cycles[i].hclass, cfg.cycles[j].hclass
            if det2(di, dj) == 0:
                continue
            for v in intersections(cfg.cycles[i], cfg.cycles[j]):
                # step small enough not to reach any other line
                gaps, rates = [], []
                for c in cfg.cycles:
                    lv = c.level(v)
                    g = _frac(lv)
                    if g:
                        gaps.append(min(g, 1 - g))
                    a, b = c.hclass
                    rates.append(abs(b * di[0] - a * di[1]) + abs(b * dj[0] - a * dj[1]))
                eps = min(gaps + [Fraction(1)]) / (2 * max(rates) + 2)
                for s in (1, -1):
                    for t in (1, -1):
                        q = (v[0] + eps * (s * di[0] + t * dj[0]), v[1] + eps * (s * di[1] + t * dj[1]))
                        key = _cell_key(cfg, q)
                        ck = _canonical_key(cfg, key, pair)
                        seen.setdefault(ck, key)
    faces = []
    for ck, key in sorted(seen.items()):
        poly = _cell_polygon(cfg, key)
        rep = (sum(v[0] for v in poly) / len(poly), sum(v[1] for v in poly) / len(poly))
        faces.append(Face(ck, reduce_point(rep), poly))
    return faces
