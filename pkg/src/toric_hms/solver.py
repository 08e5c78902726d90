"""Search for torus configurations realising a target directed algebra.

Homology classes come from the determinant constraints |det(c_i, c_j)| =
dim hom(i, j).  Offsets, punctures and dots are then found in three stages:

1. For each offset candidate the straight-line arrangement is fixed, and
   every triangle that could survive some puncture set is enumerated once
   (with the covering-radius bound sqrt(1/2), valid for any non-empty puncture
   set).  A triangle's edges run along the cycles, so it is a union of
   arrangement faces and a puncture kills it exactly when its face is
   covered.  Puncture placements are therefore scanned as face subsets with
   bitmask arithmetic, keeping those whose surviving triangle counts match the
   target's absolute structure constants.
2. Dots are placed (one per cycle) and the signed structure is compared with
   the target by the signed-bijection search.  Sliding a dot across a
   crossing p flips the sign of exactly the triangles with a corner at p, so
   dot positions only change the algebra by basis signs: one placement
   decides whether a puncture set works, and each dot is put on the first
   segment of its cycle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from .algebra import DirectedAlgebra
from .errors import HMSError, ShapeError
from .fukaya import build_category, check_a_infinity
from .torus import (
    Point,
    TorusConfig,
    TorusLine,
    _dots_on_segment,
    arrangement_faces,
    canonical_class,
    det2,
    enumerate_triangles,
    grading_lifts,
    intersections,
    lifts_in_triangle,
    line_parameter,
    reduce_point,
    validate_config,
)
from .verifier import find_signed_equivalence, verify_certificate

Vec = tuple[int, int]


class SearchExhaustedError(HMSError):
    """No configuration was found; ``report`` carries the counters."""

    def __init__(self, message: str, report: "SolveReport"):
        super().__init__(message)
        self.report = report


@dataclass(frozen=True)
class SearchSpace:
    class_bound: int = 4
    max_denominator: int = 24
    punctures: int = 6
    dots_per_cycle: int = 1
    node_budget: int = 20_000  # offset candidates examined

    def __post_init__(self):
        for name in ("class_bound", "max_denominator", "punctures", "dots_per_cycle", "node_budget"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.dots_per_cycle % 2 == 0:
            raise ValueError("dots_per_cycle must be odd")


# -- classes -----------------------------------------------------------------------


def _vector_key(v: Vec):
    a, b = v
    return (max(abs(a), abs(b)), abs(a) + abs(b), a < 0, abs(b), abs(a))


def primitive_classes(bound: int) -> list[Vec]:
    """Canonical primitive classes with entries in [-bound, bound], small first."""
    out = {
        canonical_class(a, b)
        for a in range(-bound, bound + 1)
        for b in range(-bound, bound + 1)
        if (a, b) != (0, 0) and math.gcd(a, b) == 1
    }
    return sorted(out, key=_vector_key)


def _unimodular_image(src: Sequence[Vec], dst: Sequence[Vec]) -> bool:
    """Is there M in SL2(Z) with M src_l = +-dst_l for every l?"""
    n = len(src)
    pair = next(((p, q) for p in range(n) for q in range(p + 1, n) if det2(src[p], src[q]) != 0), None)
    if pair is None:
        # all parallel: any primitive vector maps to any other
        return all(det2(dst[0], d) == 0 for d in dst)
    p, q = pair
    u, v = src[p], src[q]
    d = det2(u, v)
    for sp in (1, -1):
        for sq in (1, -1):
            u2 = (sp * dst[p][0], sp * dst[p][1])
            v2 = (sq * dst[q][0], sq * dst[q][1])
            if det2(u2, v2) != d:
                continue
            # M = [u2 v2] [u v]^-1
            m = ((u2[0] * v[1] - v2[0] * u[1], -u2[0] * v[0] + v2[0] * u[0]),
                 (u2[1] * v[1] - v2[1] * u[1], -u2[1] * v[0] + v2[1] * u[0]))
            if any(x % d for row in m for x in row):
                continue
            m = tuple(tuple(x // d for x in row) for row in m)
            ok = True
            for s, t in zip(src, dst):
                img = (m[0][0] * s[0] + m[0][1] * s[1], m[1][0] * s[0] + m[1][1] * s[1])
                if img != t and img != (-t[0], -t[1]):
                    ok = False
                    break
            if ok:
                return True
    return False


def unimodular_equivalent(c1: Sequence[Vec], c2: Sequence[Vec]) -> bool:
    return len(c1) == len(c2) and _unimodular_image(c1, c2)


def solve_classes(dim_matrix: Sequence[Sequence[int]], space: SearchSpace = SearchSpace()) -> list[tuple[Vec, ...]]:
    """Class tuples with the given |det| pattern and a feasible grading.

    Tuples are produced depth first in ``primitive_classes`` order and one
    representative is kept per SL2(Z) orbit: the first one met.
    """
    n = len(dim_matrix)
    for i in range(n):
        for j in range(n):
            if i != j and dim_matrix[i][j] != dim_matrix[j][i] and dim_matrix[j][i] != 0 and dim_matrix[i][j] != 0:
                raise ShapeError("dimension matrix is not symmetric off the diagonal")
    target = [[max(dim_matrix[i][j], dim_matrix[j][i]) for j in range(n)] for i in range(n)]
    vecs = primitive_classes(space.class_bound)
    found: list[tuple[Vec, ...]] = []

    def extend(prefix: list[Vec]):
        k = len(prefix)
        if k == n:
            tup = tuple(prefix)
            if grading_lifts(tup).feasible and not any(unimodular_equivalent(f, tup) for f in found):
                found.append(tup)
            return
        for v in vecs:
            if all(abs(det2(prefix[i], v)) == target[i][k] for i in range(k)):
                prefix.append(v)
                extend(prefix)
                prefix.pop()

    if n:
        extend([])
    return found


def dimension_matrix(a: DirectedAlgebra) -> list[list[int]]:
    return a.hom_dimensions()


# -- offsets ------------------------------------------------------------------------


def small_fractions(q_max: int) -> list[Fraction]:
    """Fractions in [0, 1) with denominator <= q_max, ordered by (q, p)."""
    out = []
    for q in range(1, q_max + 1):
        for p in range(q):
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
    return out


def _parallel_families(classes: Sequence[Vec]) -> list[list[int]]:
    fams: list[list[int]] = []
    for k, c in enumerate(classes):
        for f in fams:
            if det2(classes[f[0]], c) == 0:
                f.append(k)
                break
        else:
            fams.append([k])
    return fams


def offset_candidates(classes: Sequence[Vec], q_max: int) -> Iterator[tuple[Fraction, ...]]:
    """Offsets up to translation, parallel copies equally spaced.

    A torus translation moves every offset; it is used to put the first
    cycle, and the first cycle of a unimodular partner family when there is
    one, at offset 0.  A family of m parallel cycles is spread as
    base + k/m.  The remaining family bases run over small fractions by
    increasing height (largest denominator), then lexicographically.
    """
    n = len(classes)
    fams = _parallel_families(classes)
    fixed = {0}
    lead = fams[0][0]
    for f in fams[1:]:
        if abs(det2(classes[lead], classes[f[0]])) == 1:
            fixed.add(fams.index(f))
            break
    free = [k for k in range(len(fams)) if k not in fixed]
    fracs = small_fractions(q_max)
    by_height: dict[int, list[Fraction]] = {}
    for x in fracs:
        by_height.setdefault(x.denominator, []).append(x)
    for h in range(1, q_max + 1):
        pool = [x for x in fracs if x.denominator <= h]
        for bases in itertools.product(pool, repeat=len(free)):
            if free and max(x.denominator for x in bases) != h:
                continue
            base = {k: Fraction(0) for k in fixed}
            base.update(zip(free, bases))
            offs = [Fraction(0)] * n
            for fi, f in enumerate(fams):
                m = len(f)
                for k, idx in enumerate(f):
                    offs[idx] = (base[fi] + Fraction(k, m)) % 1
            yield tuple(offs)
        if not free:
            return


def _is_simple(cfg: TorusConfig) -> bool:
    """No three cycles through one point and no coincident parallel cycles."""
    seen: set[Point] = set()
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            ci, cj = cfg.cycles[i], cfg.cycles[j]
            if det2(ci.hclass, cj.hclass) == 0:
                if ci.offset == cj.offset:
                    return False
                continue
            for p in intersections(ci, cj):
                if p in seen:
                    return False
                seen.add(p)
    return True


# -- stage 1: triangles as face sets ---------------------------------------------------


@dataclass(frozen=True)
class _Tri:
    pair_key: tuple  # (i, j, k, a, b) in 1-based objects, basis indices
    output: int
    faces: int  # bitmask of covered faces
    vertices: tuple


def _candidate_triangles(cfg: TorusConfig, faces) -> list[_Tri]:
    n = cfg.n
    hom = {}
    for i in range(n):
        for j in range(i + 1, n):
            pts = cfg.hom_points(i, j)
            if pts:
                hom[(i, j)] = len(pts)
    rho = math.sqrt(0.5)
    full = (1 << len(faces)) - 1
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if (i, j) not in hom or (j, k) not in hom or (i, k) not in hom:
                    continue
                for a in range(hom[(i, j)]):
                    for b in range(hom[(j, k)]):
                        groups, _ = enumerate_triangles(cfg, (i, j, k), a, b, rho=rho, keep_punctured=True)
                        for o, patches in groups.items():
                            for p in patches:
                                mask = 0
                                for fi, f in enumerate(faces):
                                    if lifts_in_triangle(f.representative, p.vertices, closed=False):
                                        mask |= 1 << fi
                                if mask != full:
                                    out.append(_Tri((i + 1, j + 1, k + 1, a, b), o, mask, p.vertices))
    return out


def _abs_structure(t: DirectedAlgebra) -> DirectedAlgebra:
    return DirectedAlgebra(t.n, dict(t.hom), {k: {l: abs(c) for l, c in v.items()} for k, v in t.mult.items()})


def _count_algebra(cfg: TorusConfig, tris: Sequence[_Tri], signs: Sequence[int] | None = None) -> DirectedAlgebra:
    hom = {}
    for i in range(cfg.n):
        for j in range(i + 1, cfg.n):
            d = len(cfg.hom_points(i, j))
            if d:
                hom[(i + 1, j + 1)] = tuple(f"p{k}" for k in range(d))
    mult: dict = {}
    for idx, t in enumerate(tris):
        i, j, k, a, b = t.pair_key
        key = (i, j, k, f"p{a}", f"p{b}")
        combo = mult.setdefault(key, {})
        c = 1 if signs is None else signs[idx]
        combo[f"p{t.output}"] = combo.get(f"p{t.output}", 0) + c
    return DirectedAlgebra(cfg.n, hom, mult)


def _face_subsets(nfaces: int, size: int) -> np.ndarray:
    return np.array(list(itertools.combinations(range(nfaces), size)), dtype=np.int64)


def matching_face_sets(cfg: TorusConfig, faces, tris: Sequence[_Tri], target: DirectedAlgebra, size: int):
    """Face subsets (one puncture per face) whose survivors match |target|."""
    nf = len(faces)
    if size > nf:
        return []
    subsets = _face_subsets(nf, size)
    if not tris:
        return []
    cover = np.array([[(t.faces >> f) & 1 for f in range(nf)] for t in tris], dtype=np.int32)
    chosen = np.zeros((len(subsets), nf), dtype=np.int32)
    np.put_along_axis(chosen, subsets, 1, axis=1)
    alive = (chosen @ cover.T) == 0
    # survivors must realise each nonzero constant without cancellation
    need = sum(abs(c) for out in target.mult.values() for c in out.values())
    absolute = _abs_structure(target)
    good = []
    for row in np.nonzero(alive.sum(axis=1) == need)[0]:
        keep = [t for t, ok in zip(tris, alive[row]) if ok]
        if find_signed_equivalence(_count_algebra(cfg, keep), absolute) is not None:
            good.append((tuple(int(x) for x in subsets[row]), keep))
    return good


# -- rational points with small denominators ----------------------------------------------


def _face_point(face, q_max: int) -> Point | None:
    """A point of the open face with both denominators <= q_max."""
    poly = face.polygon
    xs = [v[0] for v in poly]
    ys = [v[1] for v in poly]
    m = len(poly)
    for q in range(1, q_max + 1):
        for xn in range(math.floor(min(xs) * q), math.ceil(max(xs) * q) + 1):
            for yn in range(math.floor(min(ys) * q), math.ceil(max(ys) * q) + 1):
                p = (Fraction(xn, q), Fraction(yn, q))
                inside = True
                for k in range(m):
                    a, b = poly[k], poly[(k + 1) % m]
                    if (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0]) <= 0:
                        inside = False
                        break
                if inside:
                    return reduce_point(p)
    return None


def cycle_segments(cfg: TorusConfig, c: int) -> list[tuple[Fraction, Fraction]]:
    """Parameter intervals (t0, t1) between consecutive crossings on cycle c."""
    line = cfg.cycles[c]
    base = line.point()
    ts = set()
    for o in range(cfg.n):
        if o != c and det2(line.hclass, cfg.cycles[o].hclass) != 0:
            for p in intersections(line, cfg.cycles[o]):
                ts.add(line_parameter(base, line.hclass, p))
    ts = sorted(ts)
    if not ts:
        return [(Fraction(0), Fraction(1))]
    return list(zip(ts, ts[1:] + [ts[0] + 1]))


def _segment_point(cfg: TorusConfig, c: int, seg: tuple[Fraction, Fraction], q_max: int) -> Point:
    line = cfg.cycles[c]
    base = line.point()
    d = line.hclass
    t0, t1 = seg
    best = None
    for q in range(1, q_max + 1):
        for num in range(math.floor(t0 * q), math.ceil(t1 * q) + 1):
            t = Fraction(num, q)
            if not (t0 < t < t1):
                continue
            p = reduce_point((base[0] + t * d[0], base[1] + t * d[1]))
            if max(p[0].denominator, p[1].denominator) <= q_max:
                return p
            if best is None:
                best = p
    if best is None:
        t = (t0 + t1) / 2
        best = reduce_point((base[0] + t * d[0], base[1] + t * d[1]))
    return best


# -- stage 2 and 3: dots -----------------------------------------------------------------


def _edge_parities(cfg: TorusConfig, tris: Sequence[_Tri], dots: list[list[Point]]) -> list[np.ndarray]:
    """par[c][s, t] = parity of lifts of candidate dot s of cycle c on triangle t."""
    out = []
    for c in range(cfg.n):
        d = cfg.cycles[c].hclass
        mat = np.zeros((len(dots[c]), len(tris)), dtype=np.int8)
        for ti, t in enumerate(tris):
            i0, i1, i2 = (x - 1 for x in t.pair_key[:3])
            p0, p1, p2 = t.vertices
            for (u, v), ci in zip(((p0, p1), (p1, p2), (p2, p0)), (i0, i1, i2)):
                if ci != c:
                    continue
                dt = (v[0] - u[0]) / d[0] if d[0] else (v[1] - u[1]) / d[1]
                for s, q in enumerate(dots[c]):
                    mat[s, ti] ^= _dots_on_segment(u, d, dt, [q]) & 1
        out.append(mat)
    return out


@dataclass
class SolveReport:
    offsets_examined: int = 0
    non_simple: int = 0
    face_sets_matched: int = 0
    sign_obstructed: int = 0
    unplaceable: int = 0
    budget_exhausted: bool = False

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _choose_dots(cfg: TorusConfig, tris, target, q_max: int):
    """One dot per cycle on its first segment, or None if the signs obstruct."""
    dots = [[_segment_point(cfg, c, cycle_segments(cfg, c)[0], q_max)] for c in range(cfg.n)]
    par = _edge_parities(cfg, tris, dots)
    bits = np.zeros(len(tris), dtype=np.int8)
    for c in range(cfg.n):
        bits ^= par[c][0]
    signs = [-1 if x else 1 for x in bits]
    if find_signed_equivalence(_count_algebra(cfg, tris, signs), target) is None:
        return None
    return tuple(d[0] for d in dots)


def solve_offsets_dots(
    classes: Sequence[Vec],
    target: DirectedAlgebra,
    space: SearchSpace = SearchSpace(),
    report: SolveReport | None = None,
) -> TorusConfig:
    classes = tuple(canonical_class(*c) for c in classes)
    n = len(classes)
    if n != target.n:
        raise ShapeError(f"{n} classes for an algebra with {target.n} objects")
    dims = target.hom_dimensions()
    for i in range(n):
        for j in range(i + 1, n):
            if abs(det2(classes[i], classes[j])) != dims[i][j]:
                raise ShapeError(f"|det(c{i + 1}, c{j + 1})| = {abs(det2(classes[i], classes[j]))} "
                                 f"but dim hom({i + 1},{j + 1}) = {dims[i][j]}")
    g = grading_lifts(classes)
    if not g.feasible:
        raise ShapeError(f"classes admit no grading with all indices 0; chain {g.witness}")
    report = report if report is not None else SolveReport()
    q = space.max_denominator
    for offs in offset_candidates(classes, q):
        if report.offsets_examined >= space.node_budget:
            report.budget_exhausted = True
            break
        report.offsets_examined += 1
        cfg = TorusConfig(tuple(TorusLine(c, o) for c, o in zip(classes, offs)))
        if not _is_simple(cfg):
            report.non_simple += 1
            continue
        faces = arrangement_faces(cfg)
        tris = _candidate_triangles(cfg, faces)
        for subset, keep in matching_face_sets(cfg, faces, tris, target, space.punctures):
            report.face_sets_matched += 1
            punct = [_face_point(faces[f], q) for f in subset]
            if any(p is None for p in punct):
                report.unplaceable += 1
                continue
            placed = TorusConfig(cfg.cycles, tuple(punct))
            dots = _choose_dots(placed, keep, target, q)
            if dots is None:
                report.sign_obstructed += 1
                continue
            result = TorusConfig(cfg.cycles, tuple(punct), tuple((d,) for d in dots), g.lifts)
            _final_check(result, target)
            return result
    raise SearchExhaustedError("no configuration found within the search space", report)


def _final_check(cfg: TorusConfig, target: DirectedAlgebra) -> None:
    rep = validate_config(cfg)
    if not rep.ok:
        raise AssertionError(f"solver produced an invalid config: {rep.failures}")
    fp = build_category(cfg)
    if check_a_infinity(fp):
        raise AssertionError("solver produced a non-associative category")
    cert = find_signed_equivalence(fp.algebra, target)
    if cert is None or not verify_certificate(fp.algebra, target, cert).ok:
        raise AssertionError("solver result failed certified re-verification")
