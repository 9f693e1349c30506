"""Camera model, lens undistortion, and region-of-interest cropping.

The distortion model is the usual radial + tangential one on normalized
coordinates: radial factor (1 + k1 r^2 + k2 r^4 + k3 r^6) over an optional
higher-order denominator (1 + k4 r^2 + k5 r^4 + k6 r^6), plus the two
tangential terms. The coefficient vector is ordered
[k1, k2, p1, p2, k3, k4, k5, k6]; the bundled presets leave k4..k6 at 0.
"""

from dataclasses import dataclass

import numpy as np

from .image import as_image


@dataclass(frozen=True)
class CameraModel:
    """Pinhole intrinsics plus distortion coefficients."""

    fx: float
    fy: float
    cx: float
    cy: float
    k1: float = 0.0
    k2: float = 0.0
    p1: float = 0.0
    p2: float = 0.0
    k3: float = 0.0
    k4: float = 0.0
    k5: float = 0.0
    k6: float = 0.0

    @property
    def dist(self) -> tuple:
        """Distortion coefficients as [k1, k2, p1, p2, k3, k4, k5, k6]."""
        return (self.k1, self.k2, self.p1, self.p2,
                self.k3, self.k4, self.k5, self.k6)

    @property
    def has_distortion(self) -> bool:
        return any(c != 0.0 for c in self.dist)

    def to_dict(self) -> dict:
        return {"fx": self.fx, "fy": self.fy, "cx": self.cx, "cy": self.cy,
                "dist": list(self.dist)}

    @classmethod
    def from_dict(cls, d: dict) -> "CameraModel":
        try:
            fx, fy = float(d["fx"]), float(d["fy"])
            cx, cy = float(d["cx"]), float(d["cy"])
            dist = list(d.get("dist", []))
        except (KeyError, TypeError, ValueError) as e:
            raise ValueError(f"bad camera definition: {e}") from e
        if len(dist) > 8:
            raise ValueError(f"dist takes at most 8 coefficients, got {len(dist)}")
        dist = [float(c) for c in dist] + [0.0] * (8 - len(dist))
        k1, k2, p1, p2, k3, k4, k5, k6 = dist
        return cls(fx, fy, cx, cy, k1, k2, p1, p2, k3, k4, k5, k6)


@dataclass(frozen=True)
class RegionOfInterest:
    """Axis-aligned crop window in pixel coordinates."""

    x0: int
    y0: int
    width: int
    height: int


# Per-camera calibration presets shipped with the package.
CAMERA_PRESETS = {
    "C1": CameraModel(fx=3859.63, fy=3853.00, cx=1988.85, cy=1469.96,
                      k1=-0.4883, k2=-0.5526, p1=0.0042, p2=0.0001, k3=3.6464),
    "C2": CameraModel(fx=3786.44, fy=3793.20, cx=1939.22, cy=1564.98,
                      k1=-0.5402, k2=0.0792, p1=0.0031, p2=0.0031, k3=0.8875),
    "C3": CameraModel(fx=3812.58, fy=3824.67, cx=1887.29, cy=1544.79,
                      k1=-0.5551, k2=0.2221, p1=0.0036, p2=0.0059, k3=0.2079),
    "C4": CameraModel(fx=3811.30, fy=3829.32, cx=1945.61, cy=1647.71,
                      k1=-0.4865, k2=-0.4850, p1=-0.0008, p2=0.0025, k3=2.9886),
}


def distort_point(x, y, model: CameraModel):
    """Map normalized undistorted coordinates through the lens model.

    Accepts scalars or arrays; returns (x_d, y_d) of matching shape.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    r2 = x * x + y * y
    num = 1.0 + r2 * (model.k1 + r2 * (model.k2 + r2 * model.k3))
    den = 1.0 + r2 * (model.k4 + r2 * (model.k5 + r2 * model.k6))
    radial = num / den
    xd = x * radial + 2.0 * model.p1 * x * y + model.p2 * (r2 + 2.0 * x * x)
    yd = y * radial + model.p1 * (r2 + 2.0 * y * y) + 2.0 * model.p2 * x * y
    if xd.ndim == 0:
        return float(xd), float(yd)
    return xd, yd


def undistort(img, model: CameraModel) -> np.ndarray:
    """Resample an image so straight scene lines become straight.

    Each output pixel looks up the distorted source position of its own
    normalized coordinates and samples the input bilinearly; source
    positions outside the frame produce 0.0 (black). With an all-zero
    coefficient vector the mapping is the identity and the input is
    returned unchanged (bit for bit).
    """
    img = as_image(img)
    if not model.has_distortion:
        return img.copy()

    h, w = img.shape
    us, vs = np.meshgrid(np.arange(w, dtype=np.float64),
                         np.arange(h, dtype=np.float64))
    xn = (us - model.cx) / model.fx
    yn = (vs - model.cy) / model.fy
    xd, yd = distort_point(xn, yn, model)
    return _bilinear_sample(img, xd * model.fx + model.cx,
                            yd * model.fy + model.cy)


def roi_crop(img, roi: RegionOfInterest) -> np.ndarray:
    """Cut the ROI window out of the image; the window must fit entirely."""
    img = as_image(img)
    h, w = img.shape
    if roi.width < 1 or roi.height < 1:
        raise ValueError(f"ROI must be at least 1x1, got {roi.width}x{roi.height}")
    if (roi.x0 < 0 or roi.y0 < 0
            or roi.x0 + roi.width > w or roi.y0 + roi.height > h):
        raise ValueError(
            f"ROI {roi} does not fit inside a {w}x{h} image"
        )
    return img[roi.y0:roi.y0 + roi.height, roi.x0:roi.x0 + roi.width].copy()


def _bilinear_sample(img, xs, ys) -> np.ndarray:
    """Sample `img` at float positions; positions off the frame give 0."""
    h, w = img.shape
    valid = (xs >= 0.0) & (xs <= w - 1.0) & (ys >= 0.0) & (ys <= h - 1.0)
    # Clamp so the gather below stays in bounds; invalid lanes are zeroed.
    xc = np.clip(xs, 0.0, w - 1.0)
    yc = np.clip(ys, 0.0, h - 1.0)
    x0 = np.minimum(np.floor(xc).astype(np.intp), w - 2) if w > 1 else \
        np.zeros_like(xc, dtype=np.intp)
    y0 = np.minimum(np.floor(yc).astype(np.intp), h - 2) if h > 1 else \
        np.zeros_like(yc, dtype=np.intp)
    fx = xc - x0
    fy = yc - y0
    x1 = np.minimum(x0 + 1, w - 1)
    y1 = np.minimum(y0 + 1, h - 1)
    top = (1.0 - fx) * img[y0, x0] + fx * img[y0, x1]
    bot = (1.0 - fx) * img[y1, x0] + fx * img[y1, x1]
    out = (1.0 - fy) * top + fy * bot
    out[~valid] = 0.0
    return out
