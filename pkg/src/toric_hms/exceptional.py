"""The directed algebra of the six-term exceptional collection on the blow-up of
the projective plane at three torus-fixed points.

Objects 1..3 are the shifted exceptional-curve sheaves, 4..6 the pulled-back
line bundles.  With V = span(x1, x2, x3):

    hom(i, 4) = C x_i,  hom(i, 5) = span(x_j^v : j != i),  hom(i, 6) = C e_i
    hom(4, 5) = L^2 V^v,  hom(4, 6) = V^v,  hom(5, 6) = V
"""

from __future__ import annotations

from .algebra import DirectedAlgebra

X = ("x1", "x2", "x3")
XV = ("x1v", "x2v", "x3v")
# wedge basis in the cyclic order of the published tables
WEDGE = (("x1v^x2v", (0, 1)), ("x2v^x3v", (1, 2)), ("x3v^x1v", (2, 0)))
E = ("e1", "e2", "e3")

PRETTY = {
    "x1": "x₁", "x2": "x₂", "x3": "x₃",
    "x1v": "x₁^∨", "x2v": "x₂^∨", "x3v": "x₃^∨",
    "x1v^x2v": "x₁^∨∧x₂^∨", "x2v^x3v": "x₂^∨∧x₃^∨", "x3v^x1v": "x₃^∨∧x₁^∨",
    "e1": "e₁", "e2": "e₂", "e3": "e₃",
}


def contract(v: int, w: tuple[int, int]) -> dict[int, int]:
    """i_v(a ^ b) = a(v) b - b(v) a on dual basis indices."""
    a, b = w
    out: dict[int, int] = {}
    if a == v:
        out[b] = out.get(b, 0) + 1
    if b == v:
        out[a] = out.get(a, 0) - 1
    return {k: c for k, c in out.items() if c}


def _dual(combo: dict[int, int]) -> dict[str, int]:
    return {XV[k]: c for k, c in combo.items()}


def blowup_hom_bases() -> dict[tuple[int, int], tuple[str, ...]]:
    hom = {}
    for i in range(3):
        hom[(i + 1, 4)] = (X[i],)
        hom[(i + 1, 5)] = tuple(XV[j] for j in range(3) if j != i)
        hom[(i + 1, 6)] = (E[i],)
    hom[(4, 5)] = tuple(name for name, _ in WEDGE)
    hom[(4, 6)] = XV
    hom[(5, 6)] = X
    return hom


def build_blowup_algebra() -> DirectedAlgebra:
    hom = blowup_hom_bases()
    mult = {}
    for i in range(3):
        o = i + 1
        # hom(i,4) x hom(4,5) -> hom(i,5): (v, w) -> -i_v w
        for name, w in WEDGE:
            out = {k: -c for k, c in contract(i, w).items()}
            mult[(o, 4, 5, X[i], name)] = _dual(out)
        # hom(i,4) x hom(4,6) -> hom(i,6): (v, f) -> f(v) e_i
        for j in range(3):
            mult[(o, 4, 6, X[i], XV[j])] = {E[i]: 1} if i == j else {}
        # hom(i,5) x hom(5,6) -> hom(i,6): (f, v) -> f(v) e_i
        for j in range(3):
            if j == i:
                continue
            for k in range(3):
                mult[(o, 5, 6, XV[j], X[k])] = {E[i]: 1} if j == k else {}
    # hom(4,5) x hom(5,6) -> hom(4,6): (w, v) -> i_v w
    for name, w in WEDGE:
        for k in range(3):
            mult[(4, 5, 6, name, X[k])] = _dual(contract(k, w))
    return DirectedAlgebra(6, hom, mult)


# The ten published composition tables, cell by cell.  Rows are the left
# factor, columns the right factor; "" is zero.
_TABLES: dict[tuple[int, int, int], tuple[tuple[str, ...], tuple[str, ...], tuple[tuple[str, ...], ...]]] = {
    (1, 4, 5): (("x1",), ("x1v^x2v", "x2v^x3v", "x3v^x1v"), (("-x2v", "", "x3v"),)),
    (1, 4, 6): (("x1",), XV, (("e1", "", ""),)),
    (1, 5, 6): (("x2v", "x3v"), X, (("", "e1", ""), ("", "", "e1"))),
    (2, 4, 5): (("x2",), ("x1v^x2v", "x2v^x3v", "x3v^x1v"), (("x1v", "-x3v", ""),)),
    (2, 4, 6): (("x2",), XV, (("", "e2", ""),)),
    (2, 5, 6): (("x1v", "x3v"), X, (("e2", "", ""), ("", "", "e2"))),
    (3, 4, 5): (("x3",), ("x1v^x2v", "x2v^x3v", "x3v^x1v"), (("", "x2v", "-x1v"),)),
    (3, 4, 6): (("x3",), XV, (("", "", "e3"),)),
    # the (x1v, x1) cell reads e2 in print, although hom(3,6) is spanned by e3
    (3, 5, 6): (("x1v", "x2v"), X, (("e2", "", ""), ("", "e3", ""))),
    (4, 5, 6): (
        ("x1v^x2v", "x2v^x3v", "x3v^x1v"),
        X,
        (("x2v", "-x1v", ""), ("", "x3v", "-x2v"), ("-x3v", "", "x1v")),
    ),
}


def _cell(text: str) -> dict[str, int]:
    if not text:
        return {}
    if text.startswith("-"):
        return {text[1:]: -1}
    return {text: 1}


def appendix_tables() -> DirectedAlgebra:
    """The tables exactly as published.

    Output labels are stored as printed, so the (x1v, x1) cell of the
    hom(3,5) x hom(5,6) table yields ``e2`` even though hom(3,6) is spanned
    by e3.
    """
    mult = {}
    for (i, j, k), (rows, cols, cells) in _TABLES.items():
        for a, line in zip(rows, cells):
            for b, text in zip(cols, line):
                mult[(i, j, k, a, b)] = _cell(text)
    return DirectedAlgebra(6, blowup_hom_bases(), mult)
