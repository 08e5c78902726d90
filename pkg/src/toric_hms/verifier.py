"""Signed basis bijections (monomial isomorphisms) between directed algebras.

A certificate sends the k-th basis element of hom_A(i, j) to ``sign * label``
in hom_B(i, j), and must intertwine the products:

    phi_ik(a * b) = phi_ij(a) * phi_jk(b)

The search assigns basis elements pair by pair, shorter pairs first
((j - i, i) order) so that every product is fully determined as early as
possible.  Within a pair, targets are tried in B's basis order and the sign
+1 before -1; the first certificate found is therefore the least one in that
lexicographic order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .algebra import DirectedAlgebra
from .errors import BudgetExceededError, ShapeError

DEFAULT_NODE_BUDGET = 10_000_000

Pair = tuple[int, int]


@dataclass(frozen=True)
class Certificate:
    # maps[(i, j)][k] = (label in B, sign) for the k-th basis element of A
    maps: dict[Pair, tuple[tuple[str, int], ...]]

    def image(self, pair: Pair, k: int) -> tuple[str, int]:
        return self.maps[pair][k]

    def to_json(self) -> dict:
        return {
            "maps": {
                f"{i},{j}": [{"point": k, "label": lab, "sign": s} for k, (lab, s) in enumerate(v)]
                for (i, j), v in sorted(self.maps.items())
            }
        }

    @classmethod
    def from_json(cls, doc: dict) -> "Certificate":
        maps = {}
        for key, entries in doc["maps"].items():
            i, j = (int(x) for x in key.split(","))
            entries = sorted(entries, key=lambda e: e["point"])
            if [e["point"] for e in entries] != list(range(len(entries))):
                raise ShapeError(f"certificate entries for {key} do not cover 0..{len(entries) - 1}")
            maps[(i, j)] = tuple((e["label"], int(e["sign"])) for e in entries)
        return cls(maps)


@dataclass
class SearchStats:
    nodes: int = 0  # (target, sign) assignments tried
    leaves: int = 0  # complete assignments that passed every check
    pruned: int = 0  # complete assignments ruled out by a failed check
    total: int = 0  # size of the unpruned space of signed bijections

    @property
    def accounted(self) -> bool:
        return self.leaves + self.pruned == self.total

    def to_json(self) -> dict:
        return {"nodes": self.nodes, "leaves": self.leaves, "pruned": self.pruned, "total": self.total}


def _check_shapes(a: DirectedAlgebra, b: DirectedAlgebra) -> None:
    if a.n != b.n:
        raise ShapeError(f"object counts differ: {a.n} vs {b.n}")
    if a.hom_dimensions() != b.hom_dimensions():
        raise ShapeError("hom-dimension matrices differ")


class _Product:
    """One basis product a*b of A on a chain, with B's table for that chain."""

    __slots__ = ("ij", "jk", "ik", "a", "b", "support", "table")

    def __init__(self, ij, jk, ik, a, b, support, table):
        self.ij, self.jk, self.ik = ij, jk, ik
        self.a, self.b = a, b
        self.support = support  # {index in hom_A(i,k), or ("?", label) off-basis: coefficient}
        self.table = table  # (a', b') -> {index in hom_B(i,k) or label: coefficient}


def _index_combo(combo: dict[str, int], basis: tuple[str, ...]) -> dict:
    pos = {lab: k for k, lab in enumerate(basis)}
    # labels outside the basis keep their name; they can never be matched
    return {pos.get(lab, ("?", lab)): c for lab, c in combo.items()}


def _products(a: DirectedAlgebra, b: DirectedAlgebra) -> list[_Product]:
    out = []
    for (i, j, k) in a.chains():
        ba_ik = a.basis(i, k)
        bb_ik = b.basis(i, k)
        table = {}
        for x, lx in enumerate(b.basis(i, j)):
            for y, ly in enumerate(b.basis(j, k)):
                table[(x, y)] = _index_combo(b.compose(i, j, k, lx, ly), bb_ik)
        for x, lx in enumerate(a.basis(i, j)):
            for y, ly in enumerate(a.basis(j, k)):
                support = _index_combo(a.compose(i, j, k, lx, ly), ba_ik)
                out.append(_Product((i, j), (j, k), (i, k), x, y, support, table))
    return out


class _Search:
    def __init__(self, a: DirectedAlgebra, b: DirectedAlgebra, budget: int, stats: SearchStats):
        self.a, self.b = a, b
        self.budget = budget
        self.stats = stats
        self.pairs = sorted(a.hom, key=lambda p: (p[1] - p[0], p[0], p[1]))
        self.dims = {p: len(a.hom[p]) for p in self.pairs}
        self.vars = [(p, k) for p in self.pairs for k in range(self.dims[p])]
        # image[p][k] = (target index, sign); inverse[p][target] = k
        self.image: dict[Pair, list] = {p: [None] * self.dims[p] for p in self.pairs}
        self.inverse: dict[Pair, list] = {p: [None] * self.dims[p] for p in self.pairs}
        prods = _products(a, b)
        self.touch: dict[tuple[Pair, int], list[_Product]] = {v: [] for v in self.vars}
        for pr in prods:
            self.touch[(pr.ij, pr.a)].append(pr)
            self.touch[(pr.jk, pr.b)].append(pr)
            for k in range(self.dims[pr.ik]):
                self.touch[(pr.ik, k)].append(pr)
        # leaves below a node, for the exhaustion accounting: the rest of the
        # current pair times every later pair
        def space(d):
            return math.factorial(d) * 2 ** d

        later = 1
        self.below = [0] * len(self.vars)
        for depth in range(len(self.vars) - 1, -1, -1):
            p, k = self.vars[depth]
            r = self.dims[p] - k - 1
            self.below[depth] = space(r) * later
            if k == 0:
                later *= space(self.dims[p])
        stats.total = later

    def _ok(self, pr: _Product) -> bool:
        ia = self.image[pr.ij][pr.a]
        ib = self.image[pr.jk][pr.b]
        if ia is None or ib is None:
            return True
        s = ia[1] * ib[1]
        rhs = {lab: s * c for lab, c in pr.table[(ia[0], ib[0])].items()}
        if len(rhs) != len(pr.support):
            return False
        img = self.image[pr.ik]
        inv = self.inverse[pr.ik]
        for m, c in pr.support.items():
            if not isinstance(m, int):
                return False
            t = img[m]
            if t is not None and rhs.get(t[0]) != c * t[1]:
                return False
        for lab in rhs:
            if not isinstance(lab, int):
                return False
            m = inv[lab]
            if m is not None and m not in pr.support:
                return False
        return True

    def run(self, first_only: bool = True) -> list[Certificate]:
        found: list[Certificate] = []
        self._descend(0, found, first_only)
        return found

    def _descend(self, depth: int, found: list, first_only: bool) -> bool:
        if depth == len(self.vars):
            self.stats.leaves += 1
            found.append(self._certificate())
            return first_only
        p, k = self.vars[depth]
        inv = self.inverse[p]
        for t in range(self.dims[p]):
            if inv[t] is not None:
                continue
            for sign in (1, -1):
                self.stats.nodes += 1
                if self.stats.nodes > self.budget:
                    raise BudgetExceededError(f"signed-bijection search exceeded {self.budget} nodes",
                                              self.stats.nodes)
                self.image[p][k] = (t, sign)
                inv[t] = k
                if all(self._ok(pr) for pr in self.touch[(p, k)]):
                    if self._descend(depth + 1, found, first_only):
                        return True
                else:
                    self.stats.pruned += self.below[depth]
                self.image[p][k] = None
                inv[t] = None
        return False

    def _certificate(self) -> Certificate:
        maps = {}
        for p in sorted(self.pairs):
            basis = self.b.basis(*p)
            maps[p] = tuple((basis[t], s) for t, s in self.image[p])
        return Certificate(maps)


def find_signed_equivalence(
    a: DirectedAlgebra,
    b: DirectedAlgebra,
    stats: SearchStats | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> Certificate | None:
    """Least certificate A -> B, or None once the whole space is exhausted."""
    _check_shapes(a, b)
    stats = stats if stats is not None else SearchStats()
    found = _Search(a, b, node_budget, stats).run(first_only=True)
    return found[0] if found else None


def all_signed_equivalences(a: DirectedAlgebra, b: DirectedAlgebra, stats: SearchStats | None = None,
                            node_budget: int = DEFAULT_NODE_BUDGET) -> list[Certificate]:
    _check_shapes(a, b)
    stats = stats if stats is not None else SearchStats()
    return _Search(a, b, node_budget, stats).run(first_only=False)


@dataclass
class VerificationResult:
    ok: bool
    checked: int = 0
    failure: dict | None = None

    def to_json(self) -> dict:
        return {"ok": self.ok, "checked": self.checked, "failure": self.failure}


def _push(cert: Certificate, pair: Pair, combo: dict[str, int], basis: tuple[str, ...]) -> dict[str, int] | None:
    pos = {lab: k for k, lab in enumerate(basis)}
    out: dict[str, int] = {}
    for lab, c in combo.items():
        if lab not in pos:
            return None
        new, s = cert.maps[pair][pos[lab]]
        out[new] = out.get(new, 0) + s * c
    return {k: v for k, v in out.items() if v}


def verify_certificate(a: DirectedAlgebra, b: DirectedAlgebra, cert: Certificate) -> VerificationResult:
    """Check every basis product of every composable triple, in (i, j, k) order."""
    try:
        _check_shapes(a, b)
    except ShapeError as exc:
        return VerificationResult(False, 0, {"reason": "shape", "message": str(exc)})
    for p in a.hom:
        images = cert.maps.get(p)
        if images is None or len(images) != a.dim(*p):
            return VerificationResult(False, 0, {"reason": "shape", "pair": list(p)})
        labels = [lab for lab, _ in images]
        if sorted(labels) != sorted(b.basis(*p)) or any(s not in (1, -1) for _, s in images):
            return VerificationResult(False, 0, {"reason": "not a signed bijection", "pair": list(p)})
    checked = 0
    for (i, j, k) in a.chains():
        for x, lx in enumerate(a.basis(i, j)):
            for y, ly in enumerate(a.basis(j, k)):
                checked += 1
                left = _push(cert, (i, k), a.compose(i, j, k, lx, ly), a.basis(i, k))
                nx, sx = cert.maps[(i, j)][x]
                ny, sy = cert.maps[(j, k)][y]
                right = {lab: sx * sy * c for lab, c in b.compose(i, j, k, nx, ny).items()}
                if left != right:
                    return VerificationResult(False, checked, {
                        "reason": "product mismatch",
                        "objects": [i, j, k],
                        "a": lx,
                        "b": ly,
                        "mapped_product": None if left is None else sorted(left.items()),
                        "product_of_images": sorted(right.items()),
                    })
    return VerificationResult(True, checked)
