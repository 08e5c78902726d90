import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_hms.errors import ShapeError
from toric_hms.exceptional import build_blowup_algebra
from toric_hms.resources import load_default_config
from toric_hms.solver import (
    SearchExhaustedError,
    SearchSpace,
    SolveReport,
    offset_candidates,
    primitive_classes,
    small_fractions,
    solve_classes,
    solve_offsets_dots,
    unimodular_equivalent,
)
from toric_hms.torus import det2, grading_lifts

P2_DIMS = [[1, 3, 3], [0, 1, 3], [0, 0, 1]]
BL3_CLASSES = ((1, 0), (1, 0), (1, 0), (0, 1), (3, 2), (3, 1))


def test_bl3_classes(blowup):
    assert solve_classes(blowup.hom_dimensions()) == [BL3_CLASSES]


def test_p2_classes():
    found = solve_classes(P2_DIMS)
    assert any(unimodular_equivalent(c, ((0, 1), (3, 2), (3, 1))) for c in found)
    for c in found:
        assert [abs(det2(c[i], c[j])) for i, j in itertools.combinations(range(3), 2)] == [3, 3, 3]
        assert grading_lifts(c).feasible


def test_p2_literal_order_is_not_gradable():
    assert not grading_lifts(((0, 1), (3, 1), (3, 2))).feasible
    assert grading_lifts(((0, 1), (3, 2), (3, 1))).feasible


def test_all_zero_matrix_is_one_parallel_family():
    assert solve_classes([[1, 0, 0], [0, 1, 0], [0, 0, 1]]) == [((1, 0), (1, 0), (1, 0))]


def test_no_duplicate_orbits(blowup):
    for dims in (P2_DIMS, blowup.hom_dimensions(), [[1, 1, 2], [0, 1, 1], [0, 0, 1]]):
        found = solve_classes(dims)
        for a, b in itertools.combinations(found, 2):
            assert not unimodular_equivalent(a, b)


def test_asymmetric_matrix_rejected():
    with pytest.raises(ShapeError):
        solve_classes([[1, 2], [3, 1]])


@given(st.sampled_from(primitive_classes(3)), st.sampled_from(primitive_classes(3)),
       st.sampled_from([((1, 1), (0, 1)), ((2, 1), (1, 1)), ((1, -1), (0, 1)), ((0, -1), (1, 0))]))
def test_unimodular_equivalence_detects_images(u, v, m):
    (a, b), (c, d) = m
    img = [(a * x + c * y, b * x + d * y) for x, y in (u, v)]
    assert unimodular_equivalent((u, v), img)


def test_primitive_classes_are_canonical():
    vs = primitive_classes(2)
    assert vs[:2] == [(1, 0), (0, 1)]
    assert len(vs) == len(set(vs))
    assert all(unimodular_equivalent([v], [(-v[0], -v[1])]) for v in vs)


def test_small_fractions():
    assert small_fractions(3) == [F(0), F(1, 2), F(1, 3), F(2, 3)]


def test_offset_candidates_space_parallel_families_evenly():
    first = next(offset_candidates(BL3_CLASSES, 6))
    assert first[:4] == (F(0), F(1, 3), F(2, 3), F(0))
    for offs in itertools.islice(offset_candidates(BL3_CLASSES, 6), 200):
        assert offs[0] == 0 and offs[3] == 0
        assert sorted((o - offs[0]) % 1 for o in offs[:3]) == [F(0), F(1, 3), F(2, 3)]


def test_wrong_determinants_rejected(blowup):
    with pytest.raises(ShapeError):
        solve_offsets_dots(((1, 0),) * 6, blowup)
    with pytest.raises(ShapeError):
        solve_offsets_dots(BL3_CLASSES[:5], blowup)


def test_ungradable_classes_rejected():
    from toric_hms.algebra import DirectedAlgebra

    hom = {(i, j): tuple(f"g{i}{j}{k}" for k in range(3)) for i, j in ((1, 2), (1, 3), (2, 3))}
    with pytest.raises(ShapeError, match="grading"):
        solve_offsets_dots(((0, 1), (3, 1), (3, 2)), DirectedAlgebra(3, hom, {}))


def test_budget_exhausted(blowup):
    report = SolveReport()
    with pytest.raises(SearchExhaustedError) as info:
        solve_offsets_dots(BL3_CLASSES, blowup, SearchSpace(node_budget=1), report)
    assert info.value.report is report
    assert report.budget_exhausted and report.offsets_examined == 1


def test_search_space_validation():
    with pytest.raises(ValueError):
        SearchSpace(node_budget=0)
    with pytest.raises(ValueError):
        SearchSpace(dots_per_cycle=2)


def test_reproduces_shipped_config():
    cfg = solve_offsets_dots(BL3_CLASSES, build_blowup_algebra())
    assert cfg == load_default_config()
