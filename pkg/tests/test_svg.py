import re
from fractions import Fraction

import pytest

from fareylab.contfrac import CFSide
from fareylab.curve_algebra import Slope
from fareylab.svg import render_scatter, render_tessellation, stern_brocot_edges

from oracles import farey_edges_among, stern_brocot_level


@pytest.mark.parametrize("depth", range(0, 7))
def test_edge_count_matches_enumeration(depth):
    verts = stern_brocot_level(depth)
    expect = farey_edges_among(verts)
    got = {(a.vector(), b.vector()) for a, b in stern_brocot_edges(0, 1, depth)}
    assert got == expect
    svg = render_tessellation(0, 1, depth)
    assert svg.count('class="farey"') == len(expect) == 2 ** (depth + 1) - 1


def test_depth_three_contains_named_arcs():
    svg = render_tessellation(0, 1, 3)
    for a, b in (("0/1", "1/1"), ("0/1", "1/2"), ("1/2", "1/1")):
        assert f'data-from="{a}" data-to="{b}"' in svg


def test_overlay_passes_through_convergents():
    path = CFSide((4, 4, 4)).curves(3)
    svg = render_tessellation(0, 1, 2, path, horoballs=True)
    xs = re.findall(r'class="vertex" data-slope="([^"]+)"', svg)
    assert xs[:3] == ["0/1", "1/4", "4/17"]
    assert svg.count('class="geodesic"') == 4
    assert 'data-from="1/0" data-to="0/1"' in svg
    assert svg.count('class="horoball"') == 4


def test_empty_overlay_is_plain_tessellation():
    assert render_tessellation(0, 1, 2, None) == render_tessellation(0, 1, 2, [])
    assert 'class="geodesic"' not in render_tessellation(0, 1, 2)


def test_floats_have_six_decimals():
    svg = render_tessellation(-1, 2, 3)
    attrs = re.findall(r'\b(?:d|cx|cy|r|x1|y1|x2|y2)="([^"]+)"', svg)
    nums = [n for a in attrs for n in re.findall(r"\d+\.\d+", a)]
    assert nums and all(len(n.split(".")[1]) == 6 for n in nums)


def test_invalid_viewport():
    with pytest.raises(ValueError):
        render_tessellation(1, 1, 2)


def test_scatter():
    svg = render_scatter([("a", (1, 0, 0)), ("b", (Fraction(1, 3),) * 3)])
    assert svg.count('class="limit"') == 2
    with pytest.raises(ValueError):
        render_scatter([("c", (0, 0, 0))])
