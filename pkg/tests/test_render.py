import math
import re
import xml.etree.ElementTree as ET
from fractions import Fraction as F

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from toric_hms.exceptional import PRETTY
from toric_hms.potential import BranchTrajectory
from toric_hms.render import RenderSpec, certificate_labels, render_torus, render_trajectory, svg_counts, wrapped_segments
from toric_hms.torus import TorusConfig, TorusLine

def _classes(svg, cls):
    return [e for e in ET.fromstring(svg.encode()).iter() if e.get("class") == cls]


def test_default_counts(default_cfg):
    svg = render_torus(default_cfg)
    assert svg_counts(svg) == {"cycle": 6, "dot": 6, "puncture": 6, "label": 0, "root": 0}
    ET.fromstring(svg.encode())


def test_empty_config_draws_only_the_domain():
    svg = render_torus(TorusConfig(()))
    assert len(_classes(svg, "domain")) == 1
    assert sum(svg_counts(svg).values()) == 0


def test_byte_identical(default_cfg):
    assert render_torus(default_cfg) == render_torus(default_cfg)


def test_fixed_decimals(default_cfg):
    svg = render_torus(default_cfg, RenderSpec(size=300))
    body = svg.split("\n", 1)[1]
    nums = re.findall(r'(?<=[ ",])-?\d+\.\d+', body)
    assert nums and all(len(n.split(".")[1]) == 6 for n in nums)
    assert "-0.000000" not in svg


def test_coordinates_inside_domain(default_cfg):
    spec = RenderSpec()
    svg = render_torus(default_cfg, spec)
    lo, hi = spec.margin, spec.size - spec.margin
    for path in _classes(svg, "cycle"):
        vals = [float(v) for v in re.findall(r"-?\d+\.\d+", path.get("d"))]
        assert all(lo - 1e-9 <= v <= hi + 1e-9 for v in vals)


def test_colors_follow_spec(default_cfg):
    svg = render_torus(default_cfg, RenderSpec(colors=(1, 1, 1, 0, 2, 3)))
    strokes = [p.get("stroke") for p in _classes(svg, "cycle")]
    assert strokes[:3] == [strokes[0]] * 3 and len(set(strokes)) == 4


@given(st.integers(-5, 5), st.integers(-5, 5), st.fractions(0, 1, max_denominator=12))
def test_segments_cover_the_class(a, b, off):
    if (a, b) == (0, 0) or math.gcd(a, b) != 1:
        return
    line = TorusLine((a, b), off)
    segs = wrapped_segments(line)
    total = sum(math.hypot(float(q[0] - p[0]), float(q[1] - p[1])) for p, q in segs)
    assert math.isclose(total, math.hypot(a, b), rel_tol=1e-12)
    for p, q in segs:
        assert all(0 <= c <= 1 for c in (*p, *q))
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        assert line.level(mid) == round(line.level(mid))
    # consecutive pieces are glued across the boundary of the square
    for (_, q), (p, _) in zip(segs, segs[1:]):
        assert all((u - v) % 1 == 0 for u, v in zip(q, p))


def test_certificate_labels(default_cfg, default_fp, default_cert):
    labels = certificate_labels(default_fp.points, default_cert.maps)
    svg = render_torus(default_cfg, labels=labels)
    texts = [e.text for e in _classes(svg, "label")]
    assert len(texts) == 21
    assert len(_classes(svg, "point")) == 21
    expect = sorted(PRETTY.get(lab, lab) for (i, j), basis in default_cert.maps.items() for lab, _ in basis)
    assert sorted(t.lstrip("−") for t in texts) == expect
    signs = [s for pair in labels.values() for _, _, s in pair]
    assert sum(t.startswith("−") for t in texts) == signs.count(-1)


def test_trajectory_svg():
    roots0 = np.array([1 + 0j, -1 + 0j, 1j, -1j])
    roots1 = np.array([0.5 + 0j, 0.5 + 1e-7j, 2j, -2j])
    traj = BranchTrajectory([(0.0, roots0), (0.5, (roots0 + roots1) / 2), (1.0, roots1)], True, (0, 1), 1e-7, 1.0)
    svg = render_trajectory(traj, title="a < b")
    assert svg_counts(svg)["root"] == 4
    assert len(_classes(svg, "start")) == 4 and len(_classes(svg, "end")) == 4
    assert len(_classes(svg, "origin")) == 1
    assert "a &lt; b" in svg
    assert svg == render_trajectory(traj, title="a < b")
    pts = _classes(svg, "root")[0].get("points").split()
    assert len(pts) == 3


def test_dots_and_punctures_are_distinguished(default_cfg):
    svg = render_torus(default_cfg)
    assert {e.get("fill") for e in _classes(svg, "dot")} == {"#000000"}
    assert {e.get("fill") for e in _classes(svg, "puncture")} == {"#ffffff"}
    half = F(1, 2)
    cfg = TorusConfig((TorusLine((1, 0), 0),), ((half, half),), ((( F(1, 4), F(0)),),))
    assert svg_counts(render_torus(cfg)) == {"cycle": 1, "dot": 1, "puncture": 1, "label": 0, "root": 0}
