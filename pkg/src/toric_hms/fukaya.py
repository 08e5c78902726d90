"""The directed Fukaya category of a torus configuration as a directed algebra.

hom(i, j) for i < j is spanned by the intersection points of C_i and C_j
(lexicographic order), labelled by their exact coordinates.  The product of
p1 in hom(i0, i1) and p2 in hom(i1, i2) is the signed count of immersed
triangles with those corners.  Straight distinct lines bound no bigons, so
m1 = 0; every generator has degree 0, so m_k vanishes for k >= 3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import DirectedAlgebra, Violation, check_directed_associativity
from .errors import InvalidConfigError
from .parallel import ordered_map
from .torus import (
    EnumerationCertificate,
    Point,
    TorusConfig,
    config_lifts,
    det2,
    enumerate_triangles,
    format_point,
    maslov_index,
    validate_config,
)


@dataclass(frozen=True)
class FukayaPresentation:
    config: TorusConfig
    algebra: DirectedAlgebra
    points: dict[tuple[int, int], tuple[Point, ...]]  # 1-based pairs
    lifts: tuple[float, ...]
    certificates: dict[tuple[int, int, int], EnumerationCertificate] = field(default_factory=dict)

    def label(self, i: int, j: int, k: int) -> str:
        return self.algebra.basis(i, j)[k]

    def index_of(self, i: int, j: int, p: Point) -> int:
        return self.points[(i, j)].index(p)


def _chain_constants(args):
    cfg, (i0, i1, i2), labels, radius_scale = args
    n01 = len(labels[(i0, i1)])
    n12 = len(labels[(i1, i2)])
    out = {}
    cert = None
    for a in range(n01):
        for b in range(n12):
            groups, cert = enumerate_triangles(cfg, (i0 - 1, i1 - 1, i2 - 1), a, b, radius_scale)
            combo = {}
            for o, patches in groups.items():
                c = sum(p.sign for p in patches)
                if c:
                    combo[labels[(i0, i2)][o]] = c
            out[(i0, i1, i2, labels[(i0, i1)][a], labels[(i1, i2)][b])] = combo
    return out, cert


def build_category(cfg: TorusConfig, radius_scale: float = 1.0) -> FukayaPresentation:
    report = validate_config(cfg)
    if not report.ok:
        raise InvalidConfigError("; ".join(f["message"] for f in report.failures))
    lifts = config_lifts(cfg)
    n = cfg.n
    points, hom, degrees = {}, {}, {}
    for i in range(n):
        for j in range(i + 1, n):
            pts = tuple(cfg.hom_points(i, j))
            if not pts:
                continue
            labels = tuple(format_point(p) for p in pts)
            points[(i + 1, j + 1)] = pts
            hom[(i + 1, j + 1)] = labels
            deg = maslov_index(lifts[i], lifts[j])
            for lab in labels:
                degrees[(i + 1, j + 1, lab)] = deg
    chains = [
        (i, j, k)
        for i in range(1, n + 1)
        for j in range(i + 1, n + 1)
        for k in range(j + 1, n + 1)
        if (i, j) in hom and (j, k) in hom and (i, k) in hom
    ]
    results = ordered_map(_chain_constants, [(cfg, c, hom, radius_scale) for c in chains])
    mult, certs = {}, {}
    for c, (consts, cert) in zip(chains, results):
        mult.update(consts)
        certs[c] = cert
    algebra = DirectedAlgebra(n, hom, mult, degrees)
    return FukayaPresentation(cfg, algebra, points, lifts, certs)


def check_a_infinity(fp: FukayaPresentation) -> list[Violation]:
    """A-infinity relations with m1 = 0 and m_{k>=3} = 0: associativity of m2.

    Generators of nonzero degree would break the degree argument that kills
    the higher products, so they are reported as well.
    """
    bad = [
        Violation((i, j, j, j), (lab, "", ""), {lab: deg}, {lab: 0})
        for (i, j, lab), deg in fp.algebra.degrees.items()
        if deg != 0
    ]
    return bad + check_directed_associativity(fp.algebra)


def parallel_pairs(cfg: TorusConfig) -> list[tuple[int, int]]:
    return [
        (i + 1, j + 1)
        for i in range(cfg.n)
        for j in range(i + 1, cfg.n)
        if det2(cfg.cycles[i].hclass, cfg.cycles[j].hclass) == 0
    ]
