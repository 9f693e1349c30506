import numpy as np
import numpy.testing as npt
import pytest
from scipy import ndimage

from thinline.calibration import (
    CAMERA_PRESETS,
    CameraModel,
    RegionOfInterest,
    distort_point,
    roi_crop,
    undistort,
)


def test_distort_point_hand_computed():
    """k1=0.1, k2=0.01, p1=0.001, p2=0.002 at (0.3, 0.4): r^2 = 0.25,
    radial = 1 + 0.025 + 0.000625, worked through by hand."""
    m = CameraModel(fx=1.0, fy=1.0, cx=0.0, cy=0.0,
                    k1=0.1, k2=0.01, p1=0.001, p2=0.002)
    xd, yd = distort_point(0.3, 0.4, m)
    assert xd == pytest.approx(0.3087875, abs=1e-12)
    assert yd == pytest.approx(0.4113, abs=1e-12)


def test_distort_point_center_is_fixed():
    for model in CAMERA_PRESETS.values():
        assert distort_point(0.0, 0.0, model) == (0.0, 0.0)


def test_distort_point_radial_only_preserves_direction():
    m = CameraModel(fx=1, fy=1, cx=0, cy=0, k1=-0.3, k2=0.05)
    rng = np.random.default_rng(20)
    for _ in range(50):
        x, y = rng.uniform(-0.8, 0.8, size=2)
        xd, yd = distort_point(x, y, m)
        npt.assert_allclose(x * yd - y * xd, 0.0, atol=1e-12)


def test_distort_point_rational_terms_cancel():
    """Matching numerator and denominator coefficients leave a pure
    tangential model."""
    m = CameraModel(fx=1, fy=1, cx=0, cy=0,
                    k1=-0.4, k2=0.2, k3=1.5, k4=-0.4, k5=0.2, k6=1.5)
    xd, yd = distort_point(0.25, -0.6, m)
    assert (xd, yd) == (0.25, -0.6)


def test_distort_point_array_matches_scalar():
    m = CAMERA_PRESETS["C3"]
    rng = np.random.default_rng(21)
    xs = rng.uniform(-0.5, 0.5, size=40)
    ys = rng.uniform(-0.5, 0.5, size=40)
    xd, yd = distort_point(xs, ys, m)
    for i in range(xs.size):
        sx, sy = distort_point(float(xs[i]), float(ys[i]), m)
        assert xd[i] == sx and yd[i] == sy


def test_undistort_without_distortion_is_bit_identical():
    rng = np.random.default_rng(22)
    img = rng.uniform(0.0, 1.0, size=(40, 60))
    m = CameraModel(fx=500.0, fy=500.0, cx=30.0, cy=20.0)
    out = undistort(img, m)
    assert (out == img).all()
    assert out is not img
    out[0, 0] = -1.0
    assert img[0, 0] != -1.0


def test_undistort_matches_independent_resampler():
    """Re-derive the sampling grid from the documented model and let
    scipy do the bilinear lookup; both resamplers must agree closely."""
    rng = np.random.default_rng(23)
    h, w = 48, 64
    yy, xx = np.mgrid[0:h, 0:w]
    img = 0.5 + 0.3 * np.sin(xx / 6.0) * np.cos(yy / 5.0)
    m = CameraModel(fx=80.0, fy=80.0, cx=31.0, cy=23.0,
                    k1=-0.08, k2=0.01, p1=0.002, p2=-0.001)

    xn = (xx - m.cx) / m.fx
    yn = (yy - m.cy) / m.fy
    r2 = xn * xn + yn * yn
    radial = 1.0 + m.k1 * r2 + m.k2 * r2 ** 2 + m.k3 * r2 ** 3
    xd = xn * radial + 2 * m.p1 * xn * yn + m.p2 * (r2 + 2 * xn * xn)
    yd = yn * radial + m.p1 * (r2 + 2 * yn * yn) + 2 * m.p2 * xn * yn
    sx = xd * m.fx + m.cx
    sy = yd * m.fy + m.cy
    expected = ndimage.map_coordinates(img, [sy, sx], order=1, cval=0.0)
    inside = (sx >= 0) & (sx <= w - 1) & (sy >= 0) & (sy <= h - 1)
    expected[~inside] = 0.0

    npt.assert_allclose(undistort(img, m), expected, atol=1e-9)


def test_undistort_pincushion_pulls_border_to_black():
    """Strong positive k1 sources corner pixels from outside the frame."""
    img = np.full((60, 80), 1.0)
    m = CameraModel(fx=40.0, fy=40.0, cx=40.0, cy=30.0, k1=0.5)
    out = undistort(img, m)
    assert out[0, 0] == 0.0
    assert out[30, 40] == pytest.approx(1.0)


def test_camera_model_dict_round_trip():
    m = CAMERA_PRESETS["C2"]
    again = CameraModel.from_dict(m.to_dict())
    assert again == m


def test_camera_model_short_dist_is_padded():
    m = CameraModel.from_dict(
        {"fx": 100, "fy": 100, "cx": 50, "cy": 50, "dist": [-0.2, 0.1]}
    )
    assert m.k1 == -0.2 and m.k2 == 0.1
    assert m.dist[2:] == (0.0,) * 6


def test_camera_model_rejects_bad_dicts():
    with pytest.raises(ValueError, match="at most 8"):
        CameraModel.from_dict({"fx": 1, "fy": 1, "cx": 0, "cy": 0,
                               "dist": [0.0] * 9})
    with pytest.raises(ValueError, match="bad camera"):
        CameraModel.from_dict({"fx": 1, "fy": 1})


def test_presets_are_plausible_cameras():
    assert set(CAMERA_PRESETS) == {"C1", "C2", "C3", "C4"}
    for name, m in CAMERA_PRESETS.items():
        assert m.fx > 0 and m.fy > 0, name
        assert m.has_distortion, name
        assert (m.k4, m.k5, m.k6) == (0.0, 0.0, 0.0), name


def test_roi_crop_contents_and_copy_semantics():
    rng = np.random.default_rng(24)
    img = rng.uniform(0.0, 1.0, size=(30, 40))
    roi = RegionOfInterest(x0=5, y0=3, width=20, height=10)
    crop = roi_crop(img, roi)
    npt.assert_array_equal(crop, img[3:13, 5:25])
    crop[0, 0] = 9.0
    assert img[3, 5] != 9.0


def test_roi_crop_must_fit():
    img = np.zeros((10, 10))
    with pytest.raises(ValueError, match="does not fit"):
        roi_crop(img, RegionOfInterest(5, 5, 6, 3))
    with pytest.raises(ValueError, match="does not fit"):
        roi_crop(img, RegionOfInterest(-1, 0, 5, 5))
    with pytest.raises(ValueError, match="at least 1x1"):
        roi_crop(img, RegionOfInterest(0, 0, 0, 5))
