import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from inclab import (
    Box,
    Ellipse,
    Ellipsoid,
    FourierStar,
    InvalidShapeError,
    Polygon,
    discretize,
    interior_points,
    measure,
    shape_center,
    shape_dim,
    shape_scale,
)

axis = st.floats(0.3, 4.0, allow_nan=False)


def test_shape_validation_rejects_bad_axes():
    with pytest.raises(InvalidShapeError):
        Ellipse(0.0, 1.0)
    with pytest.raises(InvalidShapeError):
        Ellipsoid(1.0, -2.0, 1.0)
    with pytest.raises(InvalidShapeError):
        Box((1.0, 0.0, 1.0))


def test_polygon_rejects_degenerate_and_self_crossing():
    with pytest.raises(InvalidShapeError):
        Polygon(((0.0, 0.0), (1.0, 0.0)))
    with pytest.raises(InvalidShapeError):
        Polygon(((0.0, 0.0), (1.0, 1.0), (1.0, 0.0), (0.0, 1.0)))


def test_star_rejects_nonpositive_radius():
    with pytest.raises(InvalidShapeError):
        FourierStar(1.0, ((2, 0.9, 0.9),))


@settings(max_examples=25, deadline=None)
@given(axis, axis)
def test_ellipse_area_and_dim(a, b):
    shape = Ellipse(a, b)
    assert shape_dim(shape) == 2
    assert measure(shape) == pytest.approx(np.pi * a * b, rel=1e-12)


def test_polygon_area_shoelace():
    tri = Polygon(((0.0, 0.0), (2.0, 0.0), (0.0, 1.0)))
    assert measure(tri) == pytest.approx(1.0, rel=1e-14)


def test_star_area_closed_form():
    # r(t) = r0 (1 + e cos mt): area = pi r0^2 (1 + e^2 / 2)
    shape = FourierStar(1.3, ((4, 0.2, 0.0),))
    assert measure(shape) == pytest.approx(
        np.pi * 1.3**2 * (1 + 0.5 * 0.2**2), rel=1e-12
    )


def test_measure_3d():
    assert measure(Ellipsoid(2.0, 1.5, 1.0)) == pytest.approx(
        4 * np.pi / 3 * 3.0, rel=1e-12
    )
    assert measure(Box((0.5, 1.0, 2.0))) == pytest.approx(8.0, rel=1e-14)


@settings(max_examples=15, deadline=None)
@given(axis, axis)
def test_normals_outward_unit(a, b):
    grid = discretize(Ellipse(a, b), 64)
    norms = np.linalg.norm(grid.normals, axis=1)
    assert np.allclose(norms, 1.0, atol=1e-12)
    radial = np.einsum("ij,ij->i", grid.nodes - shape_center(Ellipse(a, b)), grid.normals)
    assert np.all(radial > 0)


def test_weights_sum_to_perimeter_converges():
    shape = Ellipse(2.0, 1.0)
    coarse = discretize(shape, 64).weights.sum()
    fine = discretize(shape, 256).weights.sum()
    from scipy.special import ellipe

    e2 = 1 - 1.0 / 4.0
    exact = 4 * 2.0 * ellipe(e2)
    assert abs(fine - exact) < 1e-12
    assert abs(fine - exact) <= abs(coarse - exact)


def test_polygon_weights_sum_to_perimeter():
    grid = discretize(Polygon(((0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0))), 256)
    assert grid.weights.sum() == pytest.approx(4.0, rel=1e-12)


def test_ellipsoid_grid_weights_sum_to_surface_area():
    # sphere of radius 2: surface area 16 pi
    grid = discretize(Ellipsoid(2.0, 2.0, 2.0), (48, 96))
    assert grid.weights.sum() == pytest.approx(16 * np.pi, rel=1e-10)


def test_ellipsoid_center_offset_translates_nodes():
    base = discretize(Ellipsoid(2.0, 1.5, 1.0), (24, 48))
    moved = discretize(Ellipsoid(2.0, 1.5, 1.0, center=(1.0, -2.0, 0.5)), (24, 48))
    shift = np.array([1.0, -2.0, 0.5])
    assert np.allclose(moved.nodes - base.nodes, shift, atol=1e-13)
    assert np.allclose(moved.normals, base.normals, atol=1e-13)


def test_interior_points_respect_margin():
    shape = Ellipse(2.0, 1.0)
    sample = interior_points(shape, 30, 0.25)
    assert len(sample.points) == 30
    # all points stay inside the shrunk ellipse
    x, y = sample.points[:, 0], sample.points[:, 1]
    level = (x / 2.0) ** 2 + y**2
    assert np.all(level < 1.0)
    grid = discretize(shape, 512)
    d = np.min(
        np.linalg.norm(sample.points[:, None, :] - grid.nodes[None, :, :], axis=2),
        axis=1,
    )
    assert np.all(d >= 0.25 - 1e-3)


def test_shape_scale_positive():
    for shape in (Ellipse(2.0, 1.0), Box((0.5, 0.5, 0.5)), FourierStar(1.0, ((3, 0.2, 0.0),))):
        assert shape_scale(shape) > 0


def test_discretize_rejects_tiny_resolution():
    with pytest.raises(Exception):
        discretize(Ellipse(1.0, 1.0), 4)
