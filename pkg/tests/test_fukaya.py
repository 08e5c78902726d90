from fractions import Fraction as F

import pytest
from conftest import point_of

from toric_hms.errors import InvalidConfigError
from toric_hms.exceptional import build_blowup_algebra
from toric_hms.fukaya import build_category, check_a_infinity, parallel_pairs
from toric_hms.jsonio import dumps
from toric_hms.torus import TorusConfig, arrangement_faces, enumerate_triangles
from toric_hms.verifier import find_signed_equivalence


def test_hom_dimensions_match(default_fp, blowup):
    assert default_fp.algebra.hom_dimensions() == blowup.hom_dimensions()
    assert default_fp.algebra.total_dimension() == 27


def test_parallel_cycles_have_no_morphisms(default_cfg, default_fp):
    assert parallel_pairs(default_cfg) == [(1, 2), (1, 3), (2, 3)]
    for i, j in parallel_pairs(default_cfg):
        assert default_fp.algebra.dim(i, j) == 0


def test_all_generators_degree_zero(default_fp):
    assert set(default_fp.algebra.degrees.values()) == {0}


def test_a_infinity(default_fp):
    assert check_a_infinity(default_fp) == []


def test_empty_category():
    fp = build_category(TorusConfig(()))
    assert fp.algebra.n == 0
    assert check_a_infinity(fp) == []


def test_invalid_config_rejected(default_cfg):
    bad = TorusConfig(default_cfg.cycles, default_cfg.punctures + ((F(1, 2), F(0)),), default_cfg.dots)
    with pytest.raises(InvalidConfigError):
        build_category(bad)


def _product(fp, cert, triple, la, lb):
    i, j, k = triple
    a, sa = point_of(cert, (i, j), la)
    b, sb = point_of(cert, (j, k), lb)
    combo = fp.algebra.compose(i, j, k, fp.label(i, j, a), fp.label(j, k, b))
    # transport the product of the two points into labels of the algebra
    out = {}
    for lab, c in combo.items():
        new, s = cert.maps[(i, k)][fp.algebra.basis(i, k).index(lab)]
        out[new] = out.get(new, 0) + c * s * sa * sb
    return {lab: c for lab, c in out.items() if c}, (a, b)


def test_unique_triangle_onto_e1(default_cfg, default_fp, default_cert):
    prod, (a, b) = _product(default_fp, default_cert, (1, 4, 6), "x1", "x1v")
    assert prod == {"e1": 1}
    groups, _ = enumerate_triangles(default_cfg, (0, 3, 5), a, b)
    assert sum(len(v) for v in groups.values()) == 1
    (patch,) = next(iter(groups.values()))
    assert patch.sign == 1


def test_no_triangle_from_x3_and_x1v(default_cfg, default_fp, default_cert):
    prod, (a, b) = _product(default_fp, default_cert, (3, 4, 6), "x3", "x1v")
    assert prod == {}
    groups, _ = enumerate_triangles(default_cfg, (2, 3, 5), a, b)
    assert groups == {}
    # the candidate triangle exists once the puncture is ignored
    ghost, _ = enumerate_triangles(default_cfg, (2, 3, 5), a, b, keep_punctured=True)
    assert sum(len(v) for v in ghost.values()) >= 1


def test_dotted_triangle_onto_x2v(default_cfg, default_fp, default_cert):
    prod, (a, b) = _product(default_fp, default_cert, (1, 4, 5), "x1", "x1v^x2v")
    assert prod == {"x2v": -1}
    groups, _ = enumerate_triangles(default_cfg, (0, 3, 4), a, b)
    (patches,) = groups.values()
    assert [p.sign for p in patches] == [-1]
    assert patches[0].dot_count == 1


def test_structure_constants_are_signed_counts(default_cfg, default_fp):
    for (i, j, k, a, b), out in default_fp.algebra.mult.items():
        p1 = default_fp.algebra.basis(i, j).index(a)
        p2 = default_fp.algebra.basis(j, k).index(b)
        groups, _ = enumerate_triangles(default_cfg, (i - 1, j - 1, k - 1), p1, p2)
        expect = {default_fp.algebra.basis(i, k)[o]: sum(p.sign for p in ps) for o, ps in groups.items()}
        assert out == {lab: c for lab, c in expect.items() if c}


def test_thread_count_does_not_change_output(default_cfg, monkeypatch):
    monkeypatch.setenv("HMS_THREADS", "1")
    one = dumps(build_category(default_cfg).algebra.to_json())
    monkeypatch.setenv("HMS_THREADS", "8")
    eight = dumps(build_category(default_cfg).algebra.to_json())
    assert one == eight


def test_moving_a_puncture_breaks_the_match(default_cfg):
    # move each puncture into another face; every move loses the isomorphism
    faces = arrangement_faces(default_cfg)
    target = build_blowup_algebra()
    occupied = {next(k for k, f in enumerate(faces) if f.key == fk) for fk in _face_keys(default_cfg, faces)}
    free = [k for k in range(len(faces)) if k not in occupied]
    assert free
    for k in range(len(default_cfg.punctures)):
        punct = list(default_cfg.punctures)
        punct[k] = faces[free[0]].representative
        cfg = TorusConfig(default_cfg.cycles, tuple(punct), default_cfg.dots, default_cfg.lifts)
        fp = build_category(cfg)
        same_shape = fp.algebra.hom_dimensions() == target.hom_dimensions()
        assert check_a_infinity(fp) or not same_shape or find_signed_equivalence(fp.algebra, target) is None


def _face_keys(cfg, faces):
    from toric_hms.torus import _canonical_key, _cell_key

    pair = (0, 3)
    return {_canonical_key(cfg, _cell_key(cfg, p), pair) for p in cfg.punctures}
