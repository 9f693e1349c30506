"""Gradient computation and Canny edge extraction.

The edge map is a boolean array. Thresholds live on a 0-255 magnitude
scale, so the input (nominally [0, 1]) is scaled by 255 once up front.
"""

from dataclasses import dataclass

import numpy as np

from .image import as_image, convolve2d

SOBEL_X = np.array([[-1.0, 0.0, 1.0],
                    [-2.0, 0.0, 2.0],
                    [-1.0, 0.0, 1.0]])
SOBEL_Y = np.array([[-1.0, -2.0, -1.0],
                    [0.0, 0.0, 0.0],
                    [1.0, 2.0, 1.0]])

_TAN_22_5 = np.tan(np.pi / 8.0)

# Non-maximum suppression compares against the two neighbors along the
# quantized gradient direction; offsets are (dy, dx) pairs.
_SECTOR_NEIGHBORS = {
    0: ((0, -1), (0, 1)),
    90: ((-1, 0), (1, 0)),
    45: ((-1, -1), (1, 1)),
    135: ((-1, 1), (1, -1)),
}


@dataclass(frozen=True)
class GradientField:
    """Per-pixel gradients with magnitude and quantized direction.

    `direction` holds one of {0, 45, 90, 135}: the gradient angle folded
    into [0, 180) and snapped to the nearest of the four sectors.
    """

    gx: np.ndarray
    gy: np.ndarray
    magnitude: np.ndarray
    direction: np.ndarray


def sobel_gradients(img) -> GradientField:
    """3x3 Sobel gradients with a replicate border."""
    img = as_image(img)
    if img.shape[0] < 3 or img.shape[1] < 3:
        raise ValueError(f"image must be at least 3x3, got {img.shape}")
    gx = convolve2d(img, SOBEL_X)
    gy = convolve2d(img, SOBEL_Y)
    magnitude = np.hypot(gx, gy)
    return GradientField(gx, gy, magnitude, _quantize_direction(gx, gy))


def canny(img, low: float = 1.0, high: float = 100.0) -> np.ndarray:
    """Canny edges: Sobel, direction-wise thinning, dual-threshold linking.

    Args:
        img: gray image, nominally [0, 1] (scaled by 255 internally).
        low/high: hysteresis thresholds on the 0-255 magnitude scale;
            requires 0 <= low <= high.

    Returns:
        Boolean edge map of the input's shape.
    """
    if low < 0 or low > high:
        raise ValueError(f"need 0 <= low <= high, got low={low} high={high}")
    g = sobel_gradients(as_image(img) * 255.0)
    thin = _suppress_nonmaxima(g)
    mag = g.magnitude
    strong = thin & (mag >= high)
    weak = thin & (mag >= low) & (mag < high)
    return _link_edges(strong, weak)


def _quantize_direction(gx, gy) -> np.ndarray:
    ax = np.abs(gx)
    ay = np.abs(gy)
    # Boundary angles (22.5 degrees etc.) resolve identically for an image
    # and its mirror, keeping canny(fliplr(img)) == fliplr(canny(img)).
    horiz = ay <= _TAN_22_5 * ax
    vert = ay * _TAN_22_5 >= ax
    sector = np.zeros(gx.shape, dtype=np.int16)
    sector[vert] = 90
    diag = ~horiz & ~vert
    same_sign = gx * gy > 0
    sector[diag & same_sign] = 45
    sector[diag & ~same_sign] = 135
    sector[horiz] = 0
    return sector


def _suppress_nonmaxima(g: GradientField) -> np.ndarray:
    h, w = g.magnitude.shape
    padded = np.pad(g.magnitude, 1)  # zeros outside the frame
    keep = np.zeros((h, w), dtype=bool)
    for sector, ((dy1, dx1), (dy2, dx2)) in _SECTOR_NEIGHBORS.items():
        n1 = padded[1 + dy1:1 + dy1 + h, 1 + dx1:1 + dx1 + w]
        n2 = padded[1 + dy2:1 + dy2 + h, 1 + dx2:1 + dx2 + w]
        m = g.direction == sector
        # >= on both sides keeps 1-px plateaus: a thin ridge whose two
        # flanks tie would vanish entirely under a strict comparison.
        keep |= m & (g.magnitude >= n1) & (g.magnitude >= n2)
    return keep


def _link_edges(strong, weak) -> np.ndarray:
    """Keep strong pixels plus weak pixels 8-connected to them."""
    h, w = strong.shape
    final = strong.copy()
    flat_final = final.ravel()
    flat_weak = weak.ravel()
    frontier = np.flatnonzero(flat_final)
    offsets = []
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                offsets.append((dy, dx))
    while frontier.size:
        ys, xs = np.unravel_index(frontier, (h, w))
        candidates = []
        for dy, dx in offsets:
            ny = ys + dy
            nx = xs + dx
            ok = (ny >= 0) & (ny < h) & (nx >= 0) & (nx < w)
            candidates.append(ny[ok] * w + nx[ok])
        cand = np.unique(np.concatenate(candidates))
        grow = cand[flat_weak[cand] & ~flat_final[cand]]
        flat_final[grow] = True
        frontier = grow
    return final
