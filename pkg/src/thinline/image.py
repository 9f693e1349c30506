"""Pixel-buffer primitives shared by every stage.

Images are plain 2-D float64 arrays, row-major (height, width), with
intensities nominally in [0, 1]. Stages may leave that range transiently
(sharpening overshoot, for example); file output clamps.
"""

import numpy as np

# Rec. 601 luma weights, the default for RGB -> gray conversion.
GRAY_WEIGHTS = (0.299, 0.587, 0.114)

_PAD_MODES = {"replicate": "edge", "reflect": "reflect"}


def as_image(a) -> np.ndarray:
    """Validate and return a 2-D float64 pixel array."""
    img = np.asarray(a, dtype=np.float64)
    if img.ndim != 2:
        raise ValueError(f"expected a 2-D gray image, got shape {img.shape}")
    if img.shape[0] < 1 or img.shape[1] < 1:
        raise ValueError("image dimensions must be positive")
    return img


def to_gray(rgb, weights=GRAY_WEIGHTS) -> np.ndarray:
    """Collapse an (H, W, 3) RGB array to gray with per-channel weights.

    Weights must sum to 1 so a gray ramp maps onto itself.
    """
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) RGB array, got shape {arr.shape}")
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (3,):
        raise ValueError("weights must be a 3-tuple")
    if abs(w.sum() - 1.0) > 1e-6:
        raise ValueError(f"channel weights must sum to 1, got {w.sum()!r}")
    return arr @ w


def convolve2d(img, kernel, border="replicate") -> np.ndarray:
    """Correlate `img` with `kernel` anchored at the kernel center.

    Each output pixel is the kernel-weighted sum of its neighborhood:
    out[y, x] = sum_{i,j} kernel[i, j] * img[y + i - ch, x + j - cw].
    The border policy extends the image ('replicate' repeats the edge
    pixel, 'reflect' mirrors about it without repeating). Output has the
    input's shape and dtype float64.
    """
    img = as_image(img)
    k = np.asarray(kernel, dtype=np.float64)
    if k.ndim != 2:
        raise ValueError("kernel must be 2-D")
    if k.shape[0] % 2 == 0 or k.shape[1] % 2 == 0:
        raise ValueError(f"kernel dimensions must be odd, got {k.shape}")
    if k.shape[0] > img.shape[0] or k.shape[1] > img.shape[1]:
        raise ValueError(
            f"kernel {k.shape} does not fit in image {img.shape}"
        )
    if border not in _PAD_MODES:
        raise ValueError(f"unknown border policy {border!r}")

    h, w = img.shape
    ph, pw = k.shape[0] // 2, k.shape[1] // 2
    padded = np.pad(img, ((ph, ph), (pw, pw)), mode=_PAD_MODES[border])
    out = np.zeros((h, w), dtype=np.float64)

    if k.shape[0] == k.shape[1] and np.array_equal(k, k.T):
        # Accumulate mirrored tap pairs together so that convolving the
        # transposed image walks through bitwise-identical additions:
        # blur(img.T) == blur(img).T exactly, not just approximately.
        n = k.shape[0]
        for r in range(n):
            for c in range(r, n):
                wgt = k[r, c]
                if wgt == 0.0:
                    continue
                a = padded[r:r + h, c:c + w]
                if r == c:
                    out += wgt * a
                else:
                    out += wgt * (a + padded[c:c + h, r:r + w])
    else:
        for r in range(k.shape[0]):
            for c in range(k.shape[1]):
                wgt = k[r, c]
                if wgt == 0.0:
                    continue
                out += wgt * padded[r:r + h, c:c + w]
    return out
