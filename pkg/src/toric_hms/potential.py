"""The mirror Laurent potential of a toric surface and its Morse data."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import qmc

from .catalog import Fan, convex_hull, load_surface, normalized_volume
from .errors import (
    AmbiguousOrderingError,
    DomainError,
    IncompleteSearchError,
    InvalidCoefficientsError,
    NumericError,
    TracingFailedError,
)
from .parallel import ordered_map

Exponent = tuple[int, int]

# labelled as v1..v6 of the three-point blow-up
BL3_REFERENCE_COEFFS: tuple[complex, ...] = (1, 1, 1, 0.215, 0.25, 0.3)
PERTURBATION = 0.0137j


@dataclass(frozen=True)
class LaurentPolynomial:
    terms: dict[Exponent, complex]

    def __post_init__(self):
        clean = {}
        for e, c in self.terms.items():
            e = (int(e[0]), int(e[1]))
            c = complex(c)
            if c != 0:
                clean[e] = clean.get(e, 0) + c
        clean = {e: c for e, c in clean.items() if c != 0}
        if not clean:
            raise InvalidCoefficientsError("a Laurent polynomial needs at least one nonzero term")
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    def exponents(self) -> list[Exponent]:
        return list(self.terms)

    def coefficient(self, e: Exponent) -> complex:
        return self.terms.get(tuple(e), 0j)

    def newton_volume(self) -> int:
        return normalized_volume(convex_hull(self.terms))

    def __str__(self) -> str:
        parts = []
        for (a, b), c in self.terms.items():
            mono = "".join(
                f"{v}" if k == 1 else f"{v}^{k}" for v, k in (("x", a), ("y", b)) if k
            ) or "1"
            parts.append(f"({c:g})*{mono}")
        return " + ".join(parts)

    def to_json(self) -> dict:
        return {"terms": [{"exponent": list(e), "re": c.real, "im": c.imag} for e, c in self.terms.items()]}


def build_superpotential(fan: Fan, coeffs: Sequence[complex]) -> LaurentPolynomial:
    """W = sum_i q_i x^{v_i1} y^{v_i2}, coefficient i attached to generator v_i."""
    gens = fan.generators
    if len(coeffs) != len(gens):
        raise InvalidCoefficientsError(f"{len(coeffs)} coefficients for {len(gens)} rays")
    if any(complex(c) == 0 for c in coeffs):
        raise InvalidCoefficientsError("coefficients must be nonzero")
    return LaurentPolynomial({v: complex(c) for v, c in zip(gens, coeffs)})


def _check_point(point) -> tuple[complex, complex]:
    x, y = complex(point[0]), complex(point[1])
    if x == 0 or y == 0:
        raise DomainError("Laurent polynomials are defined only on (C^*)^2")
    return x, y


def evaluate(w: LaurentPolynomial, point) -> complex:
    x, y = _check_point(point)
    return sum(c * x ** a * y ** b for (a, b), c in w.terms.items())


def gradient(w: LaurentPolynomial, point) -> tuple[complex, complex]:
    x, y = _check_point(point)
    gx = sum(c * a * x ** (a - 1) * y ** b for (a, b), c in w.terms.items() if a)
    gy = sum(c * b * x ** a * y ** (b - 1) for (a, b), c in w.terms.items() if b)
    return complex(gx), complex(gy)


def hessian(w: LaurentPolynomial, point) -> np.ndarray:
    x, y = _check_point(point)
    h = np.zeros((2, 2), dtype=complex)
    for (a, b), c in w.terms.items():
        h[0, 0] += c * a * (a - 1) * x ** (a - 2) * y ** b
        h[0, 1] += c * a * b * x ** (a - 1) * y ** (b - 1)
        h[1, 1] += c * b * (b - 1) * x ** a * y ** (b - 2)
    h[1, 0] = h[0, 1]
    return h


# -- critical points -------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalPoint:
    location: tuple[complex, complex]
    value: complex
    hessian_det: complex
    gradient_norm: float = 0.0

    def to_json(self) -> dict:
        x, y = self.location
        return {
            "x": [x.real, x.imag],
            "y": [y.real, y.imag],
            "value": [self.value.real, self.value.imag],
            "hessian_det": [self.hessian_det.real, self.hessian_det.imag],
            "gradient_norm": self.gradient_norm,
        }


@dataclass(frozen=True)
class NewtonOptions:
    r_min: float = 0.3
    r_max: float = 3.0
    starts: int = 2000
    tol: float = 1e-12
    dedup: float = 1e-6
    max_iter: int = 80
    seed: int = 0
    chunk: int = 250


def _newton_chunk(args) -> np.ndarray:
    """Vectorised Newton in logarithmic coordinates u = log(x, y).

    The gradient system sum_k q_k v_k exp(<v_k, u>) = 0 is the original one
    scaled by (x, y), so its zeros are the critical points.
    """
    expo, coef, u, opts = args
    u = u.copy()
    alive = np.ones(len(u), dtype=bool)
    for _ in range(opts.max_iter):
        m = coef[None, :] * np.exp(u @ expo.T)  # (starts, terms)
        g = m @ expo  # (starts, 2)
        j00 = m @ (expo[:, 0] * expo[:, 0])
        j01 = m @ (expo[:, 0] * expo[:, 1])
        j11 = m @ (expo[:, 1] * expo[:, 1])
        det = j00 * j11 - j01 * j01
        with np.errstate(all="ignore"):
            du0 = (j11 * g[:, 0] - j01 * g[:, 1]) / det
            du1 = (-j01 * g[:, 0] + j00 * g[:, 1]) / det
        step = np.stack([du0, du1], axis=1)
        bad = ~np.isfinite(step).all(axis=1)
        alive &= ~bad
        step[bad] = 0
        u = u - step
        # wandering far off the annulus counts as divergence
        alive &= np.abs(u.real).max(axis=1) < 30
        u[~alive] = 0
        if (np.abs(step[alive]).max(initial=0.0)) < opts.tol:
            break
    u[~alive] = np.nan
    return u


def _polish(w: LaurentPolynomial, x: complex, y: complex, steps: int = 6) -> tuple[complex, complex]:
    for _ in range(steps):
        g = np.array(gradient(w, (x, y)))
        if np.linalg.norm(g) < 1e-15:
            break
        h = hessian(w, (x, y))
        try:
            dx, dy = np.linalg.solve(h, g)
        except np.linalg.LinAlgError:
            break
        x, y = x - dx, y - dy
    return x, y


def find_critical_points(w: LaurentPolynomial, options: NewtonOptions = NewtonOptions()) -> list[CriticalPoint]:
    """Multistart Newton from Halton starts in an annulus of moduli.

    The expected count is the normalized volume of the Newton polygon; any
    other count raises IncompleteSearchError with the points that were found.
    """
    expected = w.newton_volume()
    expo = np.array(w.exponents(), dtype=float)
    coef = np.array([w.terms[e] for e in w.exponents()], dtype=complex)
    sampler = qmc.Halton(d=4, scramble=True, seed=options.seed)
    s = sampler.random(options.starts)
    lo, hi = math.log(options.r_min), math.log(options.r_max)
    radii = lo + (hi - lo) * s[:, :2]
    angles = 2 * math.pi * s[:, 2:]
    u0 = radii + 1j * angles
    chunks = [(expo, coef, u0[k:k + options.chunk], options) for k in range(0, len(u0), options.chunk)]
    sols = np.concatenate(ordered_map(_newton_chunk, chunks))
    sols = sols[np.isfinite(sols).all(axis=1)]

    found: list[tuple[complex, complex]] = []
    for u in sols:
        x, y = complex(np.exp(u[0])), complex(np.exp(u[1]))
        if any(abs(x - a) < options.dedup and abs(y - b) < options.dedup for a, b in found):
            continue
        x, y = _polish(w, x, y)
        if not (abs(x) > options.dedup and abs(y) > options.dedup):
            continue
        if np.linalg.norm(gradient(w, (x, y))) > 1e-8:
            continue
        if any(abs(x - a) < options.dedup and abs(y - b) < options.dedup for a, b in found):
            continue
        found.append((complex(x), complex(y)))
    found.sort(key=lambda p: (round(p[0].real, 9), round(p[0].imag, 9), round(p[1].real, 9), round(p[1].imag, 9)))
    points = [
        CriticalPoint(
            (x, y),
            complex(evaluate(w, (x, y))),
            complex(np.linalg.det(hessian(w, (x, y)))),
            float(np.linalg.norm(gradient(w, (x, y)))),
        )
        for x, y in found
    ]
    if len(points) != expected:
        kind = "undercount" if len(points) < expected else "overcount"
        raise IncompleteSearchError(
            f"{kind}: found {len(points)} critical points, expected {expected}", points, expected
        )
    return points


@dataclass
class MorseReport:
    degenerate: list[int] = field(default_factory=list)
    close_pairs: list[tuple[int, int]] = field(default_factory=list)
    min_abs_hessian: float | None = None
    min_separation: float | None = None

    @property
    def ok(self) -> bool:
        return not self.degenerate and not self.close_pairs

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "degenerate": list(self.degenerate),
            "close_pairs": [list(p) for p in self.close_pairs],
            "min_abs_hessian": self.min_abs_hessian,
            "min_separation": self.min_separation,
        }


def morse_report(points: Sequence[CriticalPoint], tol_degenerate: float = 1e-8,
                 tol_separation: float = 1e-6) -> MorseReport:
    rep = MorseReport()
    for k, p in enumerate(points):
        h = abs(p.hessian_det)
        rep.min_abs_hessian = h if rep.min_abs_hessian is None else min(rep.min_abs_hessian, h)
        if h < tol_degenerate:
            rep.degenerate.append(k)
    for i, j in itertools.combinations(range(len(points)), 2):
        d = abs(points[i].value - points[j].value)
        rep.min_separation = d if rep.min_separation is None else min(rep.min_separation, d)
        if d <= tol_separation:
            rep.close_pairs.append((i, j))
    return rep


# -- vanishing paths -------------------------------------------------------------------


@dataclass(frozen=True)
class VanishingPath:
    index: int
    target: complex

    def at(self, t: float) -> complex:
        return t * self.target

    @property
    def argument(self) -> float:
        return principal_arg(self.target)


def principal_arg(z: complex) -> float:
    """Argument in (-pi, pi]."""
    a = cmath.phase(z)
    return math.pi if a <= -math.pi else a


def order_vanishing_paths(values: Sequence[complex], tol: float = 1e-12) -> list[VanishingPath]:
    vals = [complex(v) for v in values]
    if any(v == 0 for v in vals):
        raise DomainError("a vanishing path cannot end at the base point 0")
    ranked = sorted(vals, key=principal_arg, reverse=True)
    for a, b in zip(ranked, ranked[1:]):
        if abs(principal_arg(a) - principal_arg(b)) <= tol:
            raise AmbiguousOrderingError(f"critical values {a} and {b} have the same argument")
    return [VanishingPath(k + 1, v) for k, v in enumerate(ranked)]


def index_vanishing_paths(values: Sequence[complex], tol: float = 1e-12) -> tuple[list[VanishingPath], list[tuple[int, int]]]:
    """Like order_vanishing_paths but tolerant of equal arguments.

    Ties are broken by increasing modulus and returned as pairs of 1-based
    indices, so a caller can still address an individual straight path even
    though the set is not distinguished.
    """
    vals = [complex(v) for v in values]
    if any(v == 0 for v in vals):
        raise DomainError("a vanishing path cannot end at the base point 0")
    ranked = sorted(vals, key=lambda v: (-principal_arg(v), abs(v)))
    ties = [
        (k + 1, k + 2) for k, (a, b) in enumerate(zip(ranked, ranked[1:]))
        if abs(principal_arg(a) - principal_arg(b)) <= tol
    ]
    return [VanishingPath(k + 1, v) for k, v in enumerate(ranked)], ties


# -- branch points of the projection to y ------------------------------------------------------


BL3_SHAPE = ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1))


def bl3_coefficients(w: LaurentPolynomial) -> tuple[complex, ...]:
    if set(w.terms) != set(BL3_SHAPE):
        raise DomainError("branch points need the six-term potential of the three-point blow-up")
    return tuple(w.terms[e] for e in BL3_SHAPE)


def discriminant_quartic(w: LaurentPolynomial, t: complex) -> np.ndarray:
    """Coefficients (highest first) of (q2 y^2 - t y + q5)^2 - 4 y (q1 + q6 y)(q4 y + q3)."""
    q1, q2, q3, q4, q5, q6 = bl3_coefficients(w)
    p = np.array([q2, -t, q5], dtype=complex)
    sq = np.convolve(p, p)
    cross = 4 * np.convolve(np.convolve([1, 0], [q6, q1]), [q4, q3])
    out = sq.copy()
    out[1:] -= cross
    return out


def branch_points(w: LaurentPolynomial, t: complex) -> np.ndarray:
    poly = discriminant_quartic(w, t)
    if poly[0] == 0:
        raise DomainError("leading coefficient q2^2 vanishes")
    roots = np.roots(poly)
    if len(roots) != 4 or not np.isfinite(roots).all():
        raise NumericError("root finder failed on the discriminant quartic")
    dp = np.polyder(poly)
    for _ in range(3):
        with np.errstate(all="ignore"):
            step = np.polyval(poly, roots) / np.polyval(dp, roots)
        # near a double root the derivative vanishes, keep the eigenvalue estimate
        step[~np.isfinite(step)] = 0
        ok = np.abs(np.polyval(poly, roots - step)) <= np.abs(np.polyval(poly, roots))
        roots = np.where(ok, roots - step, roots)
    scale = 1 + np.abs(poly).max()
    if (np.abs(np.polyval(poly, roots)) > 1e-9 * scale * (1 + np.abs(roots)) ** 4).any():
        raise NumericError("discriminant roots did not converge")
    return np.array(sorted(roots, key=lambda z: (z.real, z.imag)))


def x_discriminant(w: LaurentPolynomial, t: complex, y: complex) -> complex:
    """Discriminant in x of x^2 (q1 + q6 y) + x (q2 y + q5/y - t) + (q4 + q3/y)."""
    q1, q2, q3, q4, q5, q6 = bl3_coefficients(w)
    a = q1 + q6 * y
    b = q2 * y + q5 / y - t
    c = q4 + q3 / y
    return b * b - 4 * a * c


@dataclass
class BranchTrajectory:
    samples: list[tuple[float, np.ndarray]]
    collision_flag: bool
    colliding_pair: tuple[int, int] | None
    min_distance: float
    other_min_distance: float

    def to_json(self) -> dict:
        return {
            "collision": self.collision_flag,
            "colliding_pair": list(self.colliding_pair) if self.colliding_pair else None,
            "min_distance": self.min_distance,
            "other_min_distance": self.other_min_distance,
            "samples": [
                {"t": t, "roots": [[z.real, z.imag] for z in roots]} for t, roots in self.samples
            ],
        }


def _match(old: np.ndarray, new: np.ndarray, merge: float) -> np.ndarray | None:
    """Nearest-neighbour continuation; None when the choice is ambiguous.

    A match is ambiguous when the runner-up candidate is within a factor 2 of
    the nearest one, unless the two candidates have already merged.
    """
    order = np.empty(len(old), dtype=int)
    used = set()
    for i, z in enumerate(old):
        d = np.abs(new - z)
        rank = np.argsort(d, kind="stable")
        n1, n2 = rank[0], rank[1]
        if d[n2] < 2 * d[n1] and abs(new[n1] - new[n2]) > merge:
            return None
        order[i] = n1
        used.add(int(n1))
    if len(used) != len(old):
        # two old roots chose the same new root: only fine for a merged pair
        return _pair_merged(old, new, order, merge)
    return new[order]


def _pair_merged(old, new, order, merge):
    best = None
    for perm in itertools.permutations(range(len(new))):
        cost = sum(abs(new[p] - z) for p, z in zip(perm, old))
        if best is None or cost < best[0]:
            best = (cost, perm)
    perm = np.array(best[1])
    for i, p in enumerate(perm):
        if p != order[i] and abs(new[p] - new[order[i]]) > merge:
            return None
    return new[perm]


def trace_branch_points(
    w: LaurentPolynomial,
    path: VanishingPath,
    steps: int = 64,
    tolerance: float = 1e-5,
    min_step: float = 1e-12,
    merge: float = 1e-4,
) -> BranchTrajectory:
    """Continue the four branch points along t -> t * target, t in [0, 1]."""
    t = 0.0
    h = 1.0 / max(1, steps)
    roots = branch_points(w, 0.0)
    samples = [(0.0, roots)]
    while t < 1.0:
        step = min(h, 1.0 - t)
        while True:
            nt = 1.0 if step >= 1.0 - t else t + step
            matched = _match(roots, branch_points(w, path.at(nt)), merge)
            if matched is not None:
                break
            step /= 2
            if step < min_step:
                raise TracingFailedError(f"branch-point matching stayed ambiguous near t={t}")
        t, roots = nt, matched
        samples.append((t, roots))
        h = min(2 * step, 1.0 / max(1, steps))
    dist = {
        (i, j): float(abs(roots[i] - roots[j])) for i, j in itertools.combinations(range(len(roots)), 2)
    }
    pair = min(dist, key=dist.get)
    others = [d for p, d in dist.items() if p != pair]
    collided = dist[pair] < tolerance
    return BranchTrajectory(samples, collided, pair if collided else None, dist[pair], min(others))


# -- shipped coefficients ---------------------------------------------------------------------


def _distinct_values(w: LaurentPolynomial) -> bool:
    try:
        pts = find_critical_points(w)
    except IncompleteSearchError:
        return False
    return morse_report(pts).ok


def default_coefficients(name: str) -> tuple[complex, ...]:
    """Shipped generic coefficients, indexed like the fan's generators."""
    fan = load_surface(name)
    if name == "Bl3P2":
        return tuple(complex(c) for c in BL3_REFERENCE_COEFFS)
    ones = tuple(1 + 0j for _ in fan.generators)
    if _distinct_values(build_superpotential(fan, ones)):
        return ones
    return tuple(1 + PERTURBATION * (k + 1) for k in range(len(fan.generators)))


def parse_coefficients(text: str) -> tuple[complex, ...]:
    """``re,im;re,im;...`` (an entry may omit ``,im``)."""
    out = []
    for part in text.split(";"):
        part = part.strip()
        if not part:
            continue
        bits = [b.strip() for b in part.split(",")]
        if len(bits) == 1:
            out.append(complex(float(bits[0]), 0.0))
        elif len(bits) == 2:
            out.append(complex(float(bits[0]), float(bits[1])))
        else:
            raise InvalidCoefficientsError(f"bad coefficient {part!r}")
    return tuple(out)
