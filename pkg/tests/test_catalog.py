import pytest
from hypothesis import given
from hypothesis import strategies as st

from toric_hms.catalog import (
    SURFACES,
    Fan,
    convex_hull,
    euler_characteristic,
    load_surface,
    newton_polytope,
    normalized_volume,
    validate_fan,
)
from toric_hms.errors import DegeneratePolytopeError, NotFoundError


def test_bl3_rays_in_labelled_order():
    fan = load_surface("Bl3P2")
    assert fan.generators == ((1, 0), (0, 1), (-1, -1), (-1, 0), (0, -1), (1, 1))
    assert len(fan.rays) == 6


def test_p2_and_bl2_rays():
    assert set(load_surface("P2").rays) == {(1, 0), (0, 1), (-1, -1)}
    assert set(load_surface("Bl2P2").rays) == {(1, 0), (1, 1), (0, 1), (-1, -1), (0, -1)}


def test_unknown_surface():
    with pytest.raises(NotFoundError):
        load_surface("NOPE")


@pytest.mark.parametrize("name", SURFACES)
def test_catalog_fans_validate(name):
    rep = validate_fan(load_surface(name))
    assert rep.ok, rep.failures
    assert rep.primitive and rep.complete and rep.smooth and rep.fano


@pytest.mark.parametrize("name", SURFACES)
def test_volume_equals_euler_characteristic(name):
    fan = load_surface(name)
    assert normalized_volume(newton_polytope(fan)) == euler_characteristic(fan) == len(fan.rays)


@pytest.mark.parametrize("name, vol", [("Bl3P2", 6), ("P2", 3), ("P1xP1", 4), ("Bl1P2", 4), ("Bl2P2", 5)])
def test_normalized_volumes(name, vol):
    poly = newton_polytope(load_surface(name))
    assert normalized_volume(poly) == vol
    assert len(poly.vertices) == vol  # every ray is a vertex for these fans


def test_half_plane_fan_is_incomplete():
    rep = validate_fan(Fan.from_rays("half", [(1, 0), (-1, 0)]))
    assert not rep.complete and not rep.ok


def test_non_primitive_ray():
    rep = validate_fan(Fan.from_rays("fat", [(2, 0), (0, 1), (-1, -1)]))
    assert not rep.primitive
    assert any("primitive" in f for f in rep.failures)


def test_singular_fan_is_not_smooth():
    rep = validate_fan(Fan.from_rays("sing", [(1, 0), (0, 1), (-1, -2)]))
    assert rep.complete and not rep.smooth


def test_non_fano_fan():
    # the Hirzebruch surface F2: smooth and complete, but (0,1) is not a hull vertex
    rep = validate_fan(Fan.from_rays("F2", [(1, 0), (0, 1), (-1, 2), (0, -1)]))
    assert rep.smooth and not rep.fano


def test_degenerate_hull():
    with pytest.raises(DegeneratePolytopeError):
        convex_hull([(0, 0), (1, 1)])
    with pytest.raises(DegeneratePolytopeError):
        convex_hull([(0, 0), (1, 1), (2, 2)])


def test_fan_json_round_trip():
    fan = load_surface("Bl3P2")
    again = Fan.from_json(fan.to_json())
    assert again == fan and again.generators == fan.generators


@given(st.sampled_from(SURFACES), st.randoms(use_true_random=False))
def test_reordering_rays_gives_same_fan(name, rnd):
    fan = load_surface(name)
    rays = list(fan.rays)
    rnd.shuffle(rays)
    assert Fan.from_rays(name, rays) == fan
    assert Fan.from_rays(name, rays).rays == fan.rays
