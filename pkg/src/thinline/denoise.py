"""Preprocessing stages that run between loading and edge detection.

Four families: Gaussian smoothing, unsharp-style sharpening, relief
embossing, and a frequency-domain high-pass. All spatial filtering goes
through convolve2d with a replicate border.
"""

import numpy as np

from .image import as_image, convolve2d


def auto_sigma(size: int) -> float:
    """Default Gaussian sigma for a given odd kernel size."""
    return 0.3 * ((size - 1) / 2 - 1) + 0.8


def gaussian_kernel(size: int, sigma: float | None = None) -> np.ndarray:
    """Normalized 2-D Gaussian sampled at integer offsets.

    Args:
        size: odd edge length >= 1.
        sigma: standard deviation; None picks auto_sigma(size).

    Returns:
        (size, size) float array whose weights sum to 1.
    """
    _check_odd_size(size)
    if sigma is None:
        sigma = auto_sigma(size)
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    half = size // 2
    off = np.arange(size, dtype=np.float64) - half
    xx, yy = np.meshgrid(off, off)
    raw = np.exp(-(xx * xx + yy * yy) / (2.0 * sigma * sigma))
    raw /= 2.0 * np.pi * sigma * sigma
    return raw / raw.sum()


def gaussian_blur(img, size: int = 5, sigma: float | None = None) -> np.ndarray:
    """Smooth with a normalized Gaussian kernel (replicate border)."""
    return convolve2d(img, gaussian_kernel(size, sigma))


def sharpen_kernel(center: float) -> np.ndarray:
    """3x3 sharpening kernel: `center` at the anchor, -(center-1)/4 at the
    four edge neighbors, zero corners. Weights sum to 1; center 1 is the
    identity."""
    if center < 1.0:
        raise ValueError(f"sharpen center must be >= 1, got {center}")
    side = -(center - 1.0) / 4.0
    return np.array([[0.0, side, 0.0],
                     [side, center, side],
                     [0.0, side, 0.0]])


def sharpen(img, center: float = 5.0) -> np.ndarray:
    """Accentuate local contrast; output is intentionally not clamped."""
    return convolve2d(img, sharpen_kernel(center))


# Default relief kernel. Off-center entries are point-antisymmetric
# (k[i, j] == -k[-i, -j]); note the weights sum to -2, so embossing a
# constant level c lands at clip(0.5 - 2c), not at mid-gray.
DEFAULT_EMBOSS_KERNEL = np.array([[-5.0, -4.0, 0.0],
                                  [-4.0, -2.0, 4.0],
                                  [0.0, 4.0, 5.0]])


def emboss(img, kernel=None) -> np.ndarray:
    """Directional relief: convolve, add a 0.5 bias, clamp to [0, 1]."""
    k = DEFAULT_EMBOSS_KERNEL if kernel is None else np.asarray(kernel, float)
    if k.shape != (3, 3):
        raise ValueError(f"emboss kernel must be 3x3, got {k.shape}")
    return np.clip(convolve2d(img, k) + 0.5, 0.0, 1.0)


def dft2(img) -> np.ndarray:
    """2-D DFT with the 1/(W*H) factor on the forward transform.

    Returns a complex spectrum of the image's shape with the DC bin moved
    to the center (index (H//2, W//2)).
    """
    img = as_image(img)
    h, w = img.shape
    return np.fft.fftshift(np.fft.fft2(img)) / (w * h)


def idft2(spec) -> np.ndarray:
    """Invert dft2, returning the real part as a gray image."""
    spec = np.asarray(spec, dtype=np.complex128)
    if spec.ndim != 2:
        raise ValueError(f"expected a 2-D spectrum, got shape {spec.shape}")
    h, w = spec.shape
    return np.fft.ifft2(np.fft.ifftshift(spec)).real * (w * h)


def fft_highpass(img, radius: float) -> np.ndarray:
    """Suppress low-frequency content and rescale the result to [0, 1].

    Spectrum bins whose Euclidean distance from the DC bin is strictly
    below `radius` are zeroed; the inverse transform's real part is then
    mapped affinely so its min hits 0 and its max hits 1. A degenerate
    (constant) result comes back as all 0.5.
    """
    img = as_image(img)
    if radius < 0:
        raise ValueError(f"radius must be >= 0, got {radius}")
    spec = dft2(img)
    if radius > 0:
        h, w = spec.shape
        vv = np.arange(h, dtype=np.float64)[:, None] - h // 2
        uu = np.arange(w, dtype=np.float64)[None, :] - w // 2
        spec[vv * vv + uu * uu < radius * radius] = 0.0
    out = idft2(spec)
    lo = out.min()
    hi = out.max()
    if hi - lo < 1e-12:
        return np.full(out.shape, 0.5)
    return (out - lo) / (hi - lo)


def _check_odd_size(size: int) -> None:
    if not isinstance(size, (int, np.integer)) or size < 1 or size % 2 == 0:
        raise ValueError(f"kernel size must be an odd integer >= 1, got {size}")
