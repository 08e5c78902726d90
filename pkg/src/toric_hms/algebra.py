"""Finite directed algebras with labelled bases and integer structure constants.

Objects are numbered 1..n.  ``hom[(i, j)]`` lists basis labels for i < j
(missing or empty means zero); hom(i, i) is spanned by the formal identity
``id{i}``.  ``mult[(i, j, k, a, b)]`` is the product a*b of a in hom(i, j)
and b in hom(j, k), stored only when nonzero, as ``{label: coefficient}``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Mapping

from .errors import ShapeError

Combination = dict[str, int]


def identity_label(i: int) -> str:
    return f"id{i}"


def _clean(combo: Mapping[str, int]) -> Combination:
    return {k: v for k, v in combo.items() if v}


@dataclass(frozen=True)
class DirectedAlgebra:
    n: int
    hom: dict[tuple[int, int], tuple[str, ...]] = field(default_factory=dict)
    mult: dict[tuple[int, int, int, str, str], Combination] = field(default_factory=dict)
    degrees: dict[tuple[int, int, str], int] = field(default_factory=dict)

    def __post_init__(self):
        hom = {}
        for (i, j), labels in self.hom.items():
            if not (1 <= i < j <= self.n):
                raise ShapeError(f"hom({i},{j}) is not a forward pair")
            if labels:
                if len(set(labels)) != len(labels):
                    raise ShapeError(f"repeated basis label in hom({i},{j})")
                hom[(i, j)] = tuple(labels)
        object.__setattr__(self, "hom", dict(sorted(hom.items())))
        mult = {}
        for key, out in self.mult.items():
            i, j, k, a, b = key
            if not (i < j < k):
                raise ShapeError(f"structure constant {key} is not on a forward chain")
            if a not in hom.get((i, j), ()) or b not in hom.get((j, k), ()):
                raise ShapeError(f"structure constant {key} uses labels outside the bases")
            out = _clean(out)
            if any(not isinstance(v, int) for v in out.values()):
                raise ShapeError(f"structure constant {key} is not integral")
            if out:
                mult[key] = out
        object.__setattr__(self, "mult", mult)
        # every generator sits in degree 0 unless stated otherwise
        degrees = {(i, j, a): 0 for (i, j), labels in hom.items() for a in labels}
        degrees.update(self.degrees)
        object.__setattr__(self, "degrees", degrees)

    # -- access --------------------------------------------------------------

    def basis(self, i: int, j: int) -> tuple[str, ...]:
        if i == j:
            return (identity_label(i),)
        return self.hom.get((i, j), ())

    def dim(self, i: int, j: int) -> int:
        return len(self.basis(i, j))

    def compose(self, i: int, j: int, k: int, a: str, b: str) -> Combination:
        """Basis product a*b for a in hom(i, j), b in hom(j, k)."""
        # identities act as units on any label, so printed outputs outside a
        # basis still pass through unit laws unchanged
        if i == j and a == identity_label(i):
            return {b: 1}
        if j == k and b == identity_label(j):
            return {a: 1}
        if a not in self.basis(i, j) or b not in self.basis(j, k):
            raise KeyError(f"({a}, {b}) is not a basis pair of hom({i},{j}) x hom({j},{k})")
        return dict(self.mult.get((i, j, k, a, b), {}))

    def compose_combination(self, i: int, j: int, k: int, x: Mapping[str, int], y: Mapping[str, int]) -> Combination:
        out: Combination = {}
        for a, ca in x.items():
            for b, cb in y.items():
                for c, cc in self.compose(i, j, k, a, b).items():
                    out[c] = out.get(c, 0) + ca * cb * cc
        return _clean(out)

    def chains(self) -> Iterator[tuple[int, int, int]]:
        """Forward triples i < j < k whose three hom spaces are all nonzero."""
        for i in range(1, self.n + 1):
            for j in range(i + 1, self.n + 1):
                if not self.dim(i, j):
                    continue
                for k in range(j + 1, self.n + 1):
                    if self.dim(j, k) and self.dim(i, k):
                        yield (i, j, k)

    def hom_dimensions(self) -> list[list[int]]:
        return [[self.dim(i, j) if i <= j else 0 for j in range(1, self.n + 1)] for i in range(1, self.n + 1)]

    def total_dimension(self) -> int:
        return sum(map(sum, self.hom_dimensions()))

    def with_constant(self, key: tuple[int, int, int, str, str], out: Mapping[str, int]) -> "DirectedAlgebra":
        mult = dict(self.mult)
        mult[key] = dict(out)
        return DirectedAlgebra(self.n, dict(self.hom), mult, dict(self.degrees))

    def relabel(self, maps: Mapping[tuple[int, int], Mapping[str, tuple[str, int]]]) -> "DirectedAlgebra":
        """Transport the structure along signed basis bijections label -> (new, sign).

        Pairs or labels missing from ``maps`` are kept as they are.
        """
        def image(p, a):
            return maps.get(p, {}).get(a, (a, 1))

        def push(i, j, combo):
            if i == j:
                return dict(combo)
            out = {}
            for a, c in combo.items():
                new, s = image((i, j), a)
                out[new] = out.get(new, 0) + s * c
            return out

        hom = {p: tuple(image(p, a)[0] for a in labels) for p, labels in self.hom.items()}
        mult = {}
        for (i, j, k, a, b), out in self.mult.items():
            na, sa = image((i, j), a)
            nb, sb = image((j, k), b)
            mult[(i, j, k, na, nb)] = {l: sa * sb * c for l, c in push(i, k, out).items()}
        return DirectedAlgebra(self.n, hom, mult)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        hom = {f"{i},{i}": [identity_label(i)] for i in range(1, self.n + 1)}
        hom.update({f"{i},{j}": list(v) for (i, j), v in self.hom.items()})
        hom = dict(sorted(hom.items(), key=lambda kv: tuple(int(x) for x in kv[0].split(","))))
        mult = []
        for (i, j, k) in self.chains():
            for a in self.basis(i, j):
                for b in self.basis(j, k):
                    out = self.mult.get((i, j, k, a, b))
                    if out:
                        order = {lab: pos for pos, lab in enumerate(self.basis(i, k))}
                        terms = sorted(out.items(), key=lambda t: order.get(t[0], len(order)))
                        mult.append({"i": i, "j": j, "k": k, "a": a, "b": b,
                                     "out": [[c, lab] for lab, c in terms]})
        return {"objects": self.n, "hom": hom, "mult": mult}

    @classmethod
    def from_json(cls, doc: dict) -> "DirectedAlgebra":
        n = int(doc["objects"])
        hom = {}
        for key, labels in doc["hom"].items():
            i, j = (int(x) for x in key.split(","))
            if i < j:
                hom[(i, j)] = tuple(labels)
        mult = {}
        for e in doc.get("mult", []):
            mult[(e["i"], e["j"], e["k"], e["a"], e["b"])] = {lab: int(c) for c, lab in e["out"]}
        return cls(n, hom, mult)


def hom_dimensions(a: DirectedAlgebra) -> list[list[int]]:
    return a.hom_dimensions()


@dataclass(frozen=True)
class Violation:
    objects: tuple[int, int, int, int]
    labels: tuple[str, str, str]
    left: Combination
    right: Combination

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "labels": list(self.labels),
            "left": [[c, lab] for lab, c in sorted(self.left.items())],
            "right": [[c, lab] for lab, c in sorted(self.right.items())],
        }


def check_directed_associativity(a: DirectedAlgebra) -> list[Violation]:
    """Exhaustive (xy)z = x(yz) over basis triples on chains i <= j <= k <= l."""
    out = []
    n = a.n
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            for k in range(j, n + 1):
                for l in range(k, n + 1):
                    if not (a.dim(i, j) and a.dim(j, k) and a.dim(k, l)):
                        continue
                    for x in a.basis(i, j):
                        for y in a.basis(j, k):
                            xy = a.compose(i, j, k, x, y)
                            for z in a.basis(k, l):
                                left = a.compose_combination(i, k, l, xy, {z: 1})
                                right = a.compose_combination(i, j, l, {x: 1}, a.compose(j, k, l, y, z))
                                if left != right:
                                    out.append(Violation((i, j, k, l), (x, y, z), left, right))
    return out


@dataclass(frozen=True)
class Mismatch:
    objects: tuple[int, int, int]
    left: str
    right: str
    expected: Combination
    actual: Combination

    def to_json(self) -> dict:
        return {
            "objects": list(self.objects),
            "a": self.left,
            "b": self.right,
            "expected": [[c, lab] for lab, c in sorted(self.expected.items())],
            "actual": [[c, lab] for lab, c in sorted(self.actual.items())],
        }


@dataclass
class DiffReport:
    mismatches: list[Mismatch] = field(default_factory=list)

    @property
    def empty(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        return {"equal": self.empty, "mismatches": [m.to_json() for m in self.mismatches]}


def diff_algebras(a: DirectedAlgebra, b: DirectedAlgebra) -> DiffReport:
    """Entry-wise comparison; ``expected`` comes from ``a``, ``actual`` from ``b``."""
    if a.n != b.n or a.hom_dimensions() != b.hom_dimensions():
        raise ShapeError("algebras differ in object count or hom dimensions")
    report = DiffReport()
    for i in range(1, a.n + 1):
        for j in range(i + 1, a.n + 1):
            for k in range(j + 1, a.n + 1):
                for x in a.basis(i, j):
                    if x not in b.basis(i, j):
                        continue
                    for y in a.basis(j, k):
                        if y not in b.basis(j, k):
                            continue
                        ea = a.compose(i, j, k, x, y)
                        eb = b.compose(i, j, k, x, y)
                        if ea != eb:
                            report.mismatches.append(Mismatch((i, j, k), x, y, ea, eb))
    return report
