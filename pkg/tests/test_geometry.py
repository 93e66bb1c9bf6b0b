import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pulleyopt.geometry import (
    PULLEY_NAMES,
    ElasticTendon,
    PulleyLayout,
    SingularGeometryError,
    TendonRouting,
    build_layout,
    elastic_energy,
    leg_force,
    mirror_layout,
    path_length,
    tendon_tension,
)

finite = st.floats(-2.0, 2.0, allow_nan=False)
points = st.tuples(finite, finite, finite)
widths = st.one_of(st.just(0.0), st.floats(1e-6, 1.0))
heights = st.floats(0.05, 1.5)
layouts = st.builds(
    PulleyLayout, widths, heights, widths, heights, widths, heights, widths, heights,
    st.floats(0.2, 1.5),
)


def test_build_layout_imp_row():
    layout = build_layout([0.0, 0.5, 0.8, 0.13, 0.0, 0.5, 0.8, 0.13], x_off=0.75)
    np.testing.assert_array_equal(layout.pulley("front_upper_left"), [0.75, 0.0, 0.5])
    np.testing.assert_array_equal(layout.pulley("front_upper_right"), [0.75, 0.0, 0.5])
    np.testing.assert_array_equal(layout.pulley("front_lower_left"), [0.75, 0.4, 0.13])
    np.testing.assert_array_equal(layout.pulley("front_lower_right"), [0.75, -0.4, 0.13])
    np.testing.assert_array_equal(layout.pulley("back_lower_left"), [-0.75, 0.4, 0.13])


def test_zero_widths_collapse_pairs():
    layout = build_layout([0, 1, 0, 1, 0, 1, 0, 1])
    for pair in ("front_upper", "front_lower", "back_upper", "back_lower"):
        np.testing.assert_array_equal(layout.pulley(pair + "_left"), layout.pulley(pair + "_right"))
    # equal heights also stack each upper pulley on its lower one
    assert len({tuple(p) for p in layout.coordinates()}) == 2
    distinct = build_layout([0, 1, 0, 0.2, 0, 0.9, 0, 0.15])
    assert len({tuple(p) for p in distinct.coordinates()}) == 4


def test_nonzero_widths_give_eight_mirrored_points():
    layout = build_layout([0.1, 0.75, 0.4, 0.2, 0.1, 0.75, 0.4, 0.2])
    coords = {tuple(p) for p in layout.coordinates()}
    assert len(coords) == 8
    assert coords == {(x, -y, z) for x, y, z in coords}


@pytest.mark.parametrize(
    "params, name",
    [
        ([-0.1, 0.5, 0.4, 0.1, 0, 0.5, 0.4, 0.1], "w1"),
        ([0, 0.5, 0.4, 0.1, 0, 0.5, -1e-3, 0.1], "w4"),
        ([0, 0.5, 0.4, 0.0, 0, 0.5, 0.4, 0.1], "h2"),
        ([0, 0.5, 0.4, 0.1, 0, -0.5, 0.4, 0.1], "h3"),
    ],
)
def test_build_layout_names_bad_parameter(params, name):
    with pytest.raises(ValueError, match=name):
        build_layout(params)


def test_build_layout_rejects_wrong_count():
    with pytest.raises(ValueError, match="8"):
        build_layout([0.1] * 7)


@pytest.mark.parametrize(
    "pts, expected",
    [
        ([(0, 0, 0), (0, 0, 1)], 1.0),
        ([(0, 0, 0), (0.3, 0, 0.4)], 0.5),
        ([(0, 0, 0), (1, 0, 0), (1, 1, 0)], 2.0),
    ],
)
def test_path_length(pts, expected):
    assert path_length(pts) == pytest.approx(expected, abs=1e-15)


def test_path_length_needs_two_points():
    with pytest.raises(ValueError):
        path_length([(0, 0, 0)])


@given(st.lists(points, min_size=3, max_size=6), st.data())
def test_removing_a_point_never_lengthens(pts, data):
    i = data.draw(st.integers(1, len(pts) - 2))
    shorter = pts[:i] + pts[i + 1:]
    assert path_length(shorter) <= path_length(pts) + 1e-12
    assert path_length(pts) >= math.dist(pts[0], pts[-1]) - 1e-12


def test_tension_examples():
    tendon = ElasticTendon(300.0, 1.2)
    assert tendon_tension(1.2, tendon) == 0.0
    assert tendon_tension(1.15, tendon) == 0.0
    assert tendon_tension(1.3, tendon) == pytest.approx(30.0, rel=1e-12)


def test_pretension_shortens_slack():
    tendon = ElasticTendon(300.0, 1.0, pretension=0.1)
    assert tendon_tension(1.0, tendon) == pytest.approx(30.0)
    with pytest.raises(ValueError):
        ElasticTendon(300.0, 1.0, pretension=1.0)


@given(st.floats(0.0, 1e4), st.floats(0.1, 5.0), st.floats(0.01, 5.0), st.floats(0.01, 5.0))
def test_tension_monotone_and_zero_below_slack(k, slack, a, b):
    tendon = ElasticTendon(k, slack)
    lo, hi = sorted((a, b))
    assert 0.0 <= tendon_tension(lo, tendon) <= tendon_tension(hi, tendon)
    if hi <= slack:
        assert tendon_tension(hi, tendon) == 0.0


@pytest.mark.parametrize(
    "attachment, pulley, tension, expected",
    [
        ((0, 0, 0), (1, 0, 0), 10.0, (10, 0, 0)),
        ((0, 0, 0), (1, 0, 0), 0.0, (0, 0, 0)),
        ((0, 0, 0), (0.3, 0, 0.4), 5.0, (3, 0, 4)),
    ],
)
def test_leg_force(attachment, pulley, tension, expected):
    np.testing.assert_allclose(leg_force(attachment, pulley, tension), expected, atol=1e-14)


def test_leg_force_singular():
    with pytest.raises(SingularGeometryError):
        leg_force((1, 2, 3), (1, 2, 3), 4.0)


@given(points, points, st.one_of(st.just(0.0), st.floats(1e-6, 1e3)))
def test_leg_force_magnitude_is_tension(a, p, tension):
    if math.dist(a, p) < 1e-6:
        return
    f = leg_force(a, p, tension)
    assert np.linalg.norm(f) == pytest.approx(tension, rel=1e-12, abs=0)


@settings(max_examples=200)
@given(points, st.floats(0.1, 1000.0), st.floats(0.02, 0.5))
def test_force_is_minus_energy_gradient(a, k, stretch):
    """Central differences (h = 1e-6 m) of 1/2 k max(0, L - L0)^2."""
    pulleys = [np.array([0.75, 0.4, 0.13]), np.array([0.75, 0.0, 0.5])]
    a = np.array(a)
    if np.linalg.norm(a - pulleys[0]) < 0.05:
        return

    def length(p):
        return path_length([p] + pulleys)

    tendon = ElasticTendon(k, length(a) - stretch)
    force = leg_force(a, pulleys[0], tendon_tension(length(a), tendon))
    h = 1e-6
    grad = np.empty(3)
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        grad[j] = (elastic_energy(length(a + e), tendon) - elastic_energy(length(a - e), tendon)) / (2 * h)
    assert np.linalg.norm(force + grad) <= 1e-5 * np.linalg.norm(force)


@given(layouts)
def test_mirror_is_identity(layout):
    assert mirror_layout(layout) == layout
    coords = {tuple(p) for p in layout.coordinates()}
    assert coords == {(x, -y, z) for x, y, z in coords}


def test_mirror_negates_pairs(imp):
    layout = build_layout([0.0, 0.5, 0.4, 0.13, 0.0, 0.5, 0.8, 0.13])
    m = mirror_layout(layout)
    assert m.pulley("front_lower_left")[1] == -layout.pulley("front_lower_right")[1] == 0.2
    assert mirror_layout(imp) == imp


def test_routing_topology():
    ind = TendonRouting("independent").paths
    assert [p.name for p in ind] == ["anterior_left", "anterior_right", "posterior_left", "posterior_right"]
    for p in ind:
        side = "front" if p.group == "anterior" else "back"
        assert all(name.startswith(side) for name in p.pulleys)
        assert p.pulleys[0].split("_")[1] == "lower" and p.end is None
    coupled = TendonRouting("coupled").paths
    assert coupled[0].pulleys == ("front_lower_left", "front_upper_left", "front_upper_right", "front_lower_right")
    assert coupled[0].legs == ("left", "right")
    assert set(PULLEY_NAMES) == {n for p in coupled for n in p.pulleys}


def test_coupled_upper_segment_is_w1(imp):
    layout = build_layout([0.06, 0.7, 0.5, 0.2, 0.0, 0.6, 0.5, 0.2])
    assert path_length([layout.pulley("front_upper_left"), layout.pulley("front_upper_right")]) == pytest.approx(0.06)
    assert path_length([imp.pulley("back_upper_left"), imp.pulley("back_upper_right")]) == 0.0
