import itertools
import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.spatial import ConvexHull

from inbox.convexset import (
    BoxRegion,
    ConvexSet,
    LinearIneq,
    Polygon2D,
    QuadraticIneq,
    affine_image,
    area,
    ball,
    bounding_box,
    chord,
    contains,
    contains_all,
    convex_hull,
    diameter,
    dump_set,
    ellipse,
    from_polygon,
    interior_point,
    load_set,
    random_convex_polygon,
    regular_polygon,
    rotation,
    set_from_json,
    support_point,
    translate,
)
from inbox.errors import InputError, UnboundedError, ValidationError


# --- contains


def test_contains_square_interior(square_halfspaces):
    assert contains(square_halfspaces, [0.5, 0.5], 0.0)


def test_contains_square_outside(square_halfspaces):
    assert not contains(square_halfspaces, [1.5, 0.5], 0.0)


def test_contains_disk_boundary(disk):
    assert contains(disk, [0.6, 0.8], 1e-9)


def test_contains_dimension_mismatch(disk):
    with pytest.raises(InputError):
        contains(disk, [0.1, 0.2, 0.3])


def test_contains_negative_tol(disk):
    with pytest.raises(InputError):
        contains(disk, [0, 0], -1.0)


def test_contains_all_vectorized(disk):
    X = np.array([[0, 0], [2, 0], [0.7, 0.7]])
    assert contains_all(disk, X).tolist() == [True, False, True]


# --- inequalities


def test_linear_zero_normal_rejected():
    with pytest.raises(ValidationError):
        LinearIneq([0, 0], 1)


def test_quadratic_symmetrized():
    q = QuadraticIneq([[1, 2], [0, 5]], [0, 0], -1)
    assert np.allclose(q.A, [[1, 1], [1, 5]])


def test_quadratic_not_psd_rejected():
    with pytest.raises(ValidationError):
        QuadraticIneq([[1, 0], [0, -1]], [0, 0], -1)


def test_mixed_dimensions_rejected():
    with pytest.raises(InputError):
        ConvexSet(2, (LinearIneq([1, 0], 1), LinearIneq([1, 0, 0], 1)))


def test_empty_set_rejected():
    with pytest.raises(InputError):
        ConvexSet(2, ())


# --- polygons


def test_triangle_halfspaces():
    s = from_polygon([[0, 0], [1, 0], [0, 1]])
    assert s.n == 3
    assert contains(s, [0.1, 0.1])
    assert not contains(s, [1, 1])


def test_square_halfspaces_equivalent(square):
    assert square.n == 4
    rng = np.random.default_rng(0)
    X = rng.uniform(-0.5, 1.5, size=(2000, 2))
    expect = np.all((X >= 0) & (X <= 1), axis=1)
    assert np.array_equal(contains_all(square, X, 1e-12), expect)


def test_hexagon_apothem(hexagon):
    res = hexagon.residuals(np.zeros(2))
    assert hexagon.n == 6
    assert np.all(res <= -math.sqrt(3) / 2 + 1e-9)
    assert np.allclose(res, -math.sqrt(3) / 2)


def test_vertices_satisfy_halfspaces():
    s = random_convex_polygon(17, 3)
    R = s.residuals(s.polygon.vertices)
    assert np.all(R <= 1e-9 * s.polygon.scale)


def test_clockwise_rejected():
    with pytest.raises(ValidationError, match="clockwise"):
        Polygon2D([[0, 0], [0, 1], [1, 0]])


def test_collinear_rejected():
    with pytest.raises(ValidationError):
        Polygon2D([[0, 0], [0.5, 0], [1, 0], [0, 1]])


def test_too_few_vertices():
    with pytest.raises(ValidationError):
        Polygon2D([[0, 0], [1, 0]])


def test_self_winding_rejected():
    # a pentagram has only left turns but winds twice
    ang = 2 * np.pi * np.arange(5) * 2 / 5
    with pytest.raises(ValidationError):
        Polygon2D(np.column_stack([np.cos(ang), np.sin(ang)]))


def test_area_values(square, triangle):
    assert area(square.polygon) == pytest.approx(1.0)
    assert area(triangle.polygon) == pytest.approx(0.5)


def test_diameter_values(square, hexagon):
    d, (a, b) = diameter(square.polygon)
    assert d == pytest.approx(math.sqrt(2))
    assert np.linalg.norm(a - b) == pytest.approx(math.sqrt(2))
    d, pair = diameter(Polygon2D([[0, 0], [2, 0], [0, 1]]))
    assert d == pytest.approx(math.sqrt(5))
    assert {tuple(pair[0]), tuple(pair[1])} == {(2.0, 0.0), (0.0, 1.0)}
    assert diameter(hexagon.polygon)[0] == pytest.approx(2.0)


def _brute_diameter(V):
    return max(np.linalg.norm(a - b) for a, b in itertools.combinations(V, 2))


@pytest.mark.parametrize("n", [3, 4, 7, 50, 200, 500])
def test_diameter_matches_brute_force(n):
    rng = np.random.default_rng(n)
    for _ in range(5):
        poly = random_convex_polygon(n, rng).polygon
        assert diameter(poly)[0] == pytest.approx(_brute_diameter(poly.vertices), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 60))
def test_diameter_property(seed, n):
    poly = random_convex_polygon(n, seed).polygon
    assert diameter(poly)[0] == pytest.approx(_brute_diameter(poly.vertices), rel=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 80))
def test_hull_area_matches_fan(seed, m):
    rng = np.random.default_rng(seed)
    P = rng.normal(size=(m, 2))
    try:
        poly = convex_hull(P)
    except ValidationError:
        return
    V = poly.vertices
    A, B = V[1:-1] - V[0], V[2:] - V[0]
    fan = 0.5 * float(np.sum(np.abs(A[:, 0] * B[:, 1] - A[:, 1] * B[:, 0])))
    assert area(poly) == pytest.approx(fan, rel=1e-12)
    assert area(poly) == pytest.approx(ConvexHull(P).volume, rel=1e-9)


# --- support points and bounding boxes


def test_support_square_tie_break(square):
    assert np.array_equal(support_point(square, [1, 0]), [1, 1])


def test_support_disk(disk):
    assert np.allclose(support_point(disk, [0, 1]), [0, 1], atol=1e-6)


def test_support_triangle_tie_break(triangle):
    assert np.array_equal(support_point(triangle, [1, 1]), [1, 0])


def test_support_zero_direction(disk):
    with pytest.raises(InputError):
        support_point(disk, [0, 0])


def test_support_unbounded():
    s = ConvexSet(2, (LinearIneq([1, 0], 1), LinearIneq([-1, 0], 1)))
    with pytest.raises(UnboundedError):
        support_point(s, [0, 1])


def test_support_dominates_samples():
    s = ConvexSet(2, (QuadraticIneq(np.diag([1.0, 4.0]), [0.1, 0], -1), LinearIneq([1, 1], 0.8)))
    rng = np.random.default_rng(7)
    bb = s.bbox
    X = bb.sample(20000, rng)
    X = X[contains_all(s, X)][:1000]
    assert X.shape[0] == 1000
    for _ in range(5):
        d = rng.normal(size=2)
        p = support_point(s, d)
        assert np.all(X @ d <= p @ d + 1e-7)


def test_bounding_box_disk(disk):
    bb = bounding_box(disk)
    assert np.allclose(bb.xl, [-1, -1], atol=1e-6)
    assert np.allclose(bb.xu, [1, 1], atol=1e-6)


def test_bounding_box_ellipse():
    bb = bounding_box(ellipse(2, 1))
    assert np.allclose(bb.xl, [-2, -1], atol=1e-6)
    assert np.allclose(bb.xu, [2, 1], atol=1e-6)


def test_bounding_box_polygon():
    s = random_convex_polygon(9, 11)
    bb = bounding_box(s)
    assert np.array_equal(bb.xl, s.polygon.vertices.min(axis=0))
    assert np.array_equal(bb.xu, s.polygon.vertices.max(axis=0))


def test_bounding_box_contains_boundary_samples():
    s = ellipse(3, 0.5, center=[1, -2])
    bb = s.bbox
    ang = np.random.default_rng(1).uniform(0, 2 * np.pi, 1000)
    B = np.column_stack([1 + 3 * np.cos(ang), -2 + 0.5 * np.sin(ang)])
    assert np.all(B >= bb.xl - 1e-7) and np.all(B <= bb.xu + 1e-7)


def test_interior_point_strict():
    s = ConvexSet(3, (QuadraticIneq(np.eye(3), [0, 0, 0], -1), LinearIneq([1, 1, 1], -1.2)))
    x = interior_point(s)
    assert np.all(s.residuals(x) < 0)


# --- chords and transforms


def test_chord_disk(disk):
    lo, hi = chord(disk, [[0, 0], [0, 0.6]], [1, 0])
    assert np.allclose(lo, [-1, -0.8]) and np.allclose(hi, [1, 0.8])


def test_chord_miss(square):
    lo, hi = chord(square, [[2, 2]], [1, 0])
    assert lo[0] > hi[0]


def test_affine_image_maps_points():
    s = random_convex_polygon(8, 5)
    M = np.array([[2.0, 0.3], [-0.1, 0.7]])
    t = np.array([1.0, -3.0])
    img = affine_image(s, M, t)
    V = s.polygon.vertices
    assert np.all(img.residuals(V @ M.T + t) <= 1e-9)
    c = V.mean(axis=0)
    assert contains(img, M @ c + t)


def test_translate_ball():
    s = translate(ball(2), [3, 4])
    assert contains(s, [3, 4.99]) and not contains(s, [0, 0])


def test_rotation_orthogonal():
    R = rotation(0.3)
    assert np.allclose(R @ R.T, np.eye(2))


def test_box_region_corners():
    b = BoxRegion([0, 0, 0], [1, 2, 3])
    assert b.volume == pytest.approx(6)
    assert b.corners().shape == (8, 3)


def test_random_polygon_has_n_vertices():
    for n in (5, 12, 30):
        assert random_convex_polygon(n, n).polygon.n == n


def test_regular_polygon_area():
    assert area(regular_polygon(512).polygon) == pytest.approx(math.pi, rel=1e-4)


# --- JSON


def test_json_roundtrip(tmp_path):
    s = ConvexSet(2, (QuadraticIneq(np.eye(2), [0, 0], -1), LinearIneq([1, 0], 0.5)))
    p = tmp_path / "s.json"
    dump_set(s, p)
    back = load_set(p)
    assert back.n == 2 and back.dim == 2
    assert json.loads(dump_set(back)) == json.loads(dump_set(s))


def test_json_polygon():
    s = set_from_json({"polygon": {"vertices": [[0, 0], [1, 0], [0, 1]]}})
    assert s.polygon is not None and s.n == 3


@pytest.mark.parametrize(
    "obj, key",
    [
        ({"dim": 2}, "constraints"),
        ({"constraints": []}, "dim"),
        ({"dim": 2, "constraints": [{"type": "linear", "p": [1, 0]}]}, "'b'"),
        ({"dim": 2, "constraints": [{"type": "quadratic", "A": [[1, 0], [0, 1]], "b": [0, 0]}]}, "'c'"),
        ({"dim": 2, "constraints": [{"type": "cubic"}]}, "constraints[0].type"),
        ({"dim": 2, "constraints": [{"type": "linear", "p": [1, "x"], "b": 0}]}, "constraints[0].p[1]"),
        ({"polygon": {}}, "vertices"),
    ],
)
def test_json_errors_name_the_key(obj, key):
    with pytest.raises(InputError) as err:
        set_from_json(obj)
    assert key in str(err.value)


def test_json_invalid_text(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"dim": 2,\n "constraints": [}')
    with pytest.raises(InputError, match="line 2"):
        load_set(p)
