"""Line extraction and the windowed x-average that names the wire.

hough_segments is a progressive probabilistic Hough transform: edge
pixels vote one at a time in a random order, and as soon as one bin
crosses the support threshold the corresponding line is walked pixel by
pixel, emitted if long enough, and its pixels retired from both the mask
and the accumulator. The visiting order comes from a module-constant
seed, so identical inputs always produce identical segment lists.
"""

import math
from dataclasses import dataclass

import numpy as np

# Fixed seed for the edge-pixel visiting order; a constant keeps the
# whole detector deterministic without threading RNG state through it.
_VISIT_SEED = 0x7A11E5

_SHIFT = 16
_HALF = 1 << (_SHIFT - 1)


@dataclass(frozen=True)
class LineSegment:
    """Directed pixel-coordinate segment found by the Hough stage."""

    x1: int
    y1: int
    x2: int
    y2: int

    @property
    def length(self) -> float:
        return math.hypot(self.x2 - self.x1, self.y2 - self.y1)

    @property
    def x_mid(self) -> float:
        return (self.x1 + self.x2) / 2.0


@dataclass(frozen=True)
class ReferenceLine:
    """The detected wire: averaged x-position plus its supporting window."""

    x_bar: float
    support_count: int
    window: tuple


def hough_segments(edges, threshold: int = 100, min_len: float = 50,
                   max_gap: float = 10) -> list:
    """Extract line segments from a boolean edge map.

    Args:
        edges: boolean edge map (True marks an edge pixel).
        threshold: accumulator support a line needs before it is walked.
        min_len: minimum Euclidean endpoint distance of a kept segment.
        max_gap: largest run of non-edge pixels bridged while walking.

    Returns:
        List of LineSegment; empty input gives an empty list.
    """
    edges = np.asarray(edges)
    if edges.ndim != 2:
        raise ValueError(f"edge map must be 2-D, got shape {edges.shape}")
    if threshold < 1:
        raise ValueError(f"threshold must be >= 1, got {threshold}")
    if min_len < 1:
        raise ValueError(f"min_len must be >= 1, got {min_len}")
    if max_gap < 0:
        raise ValueError(f"max_gap must be >= 0, got {max_gap}")

    h, w = edges.shape
    ys, xs = np.nonzero(edges)
    if ys.size == 0:
        return []

    order = np.random.default_rng(_VISIT_SEED).permutation(ys.size)
    mask = edges.astype(np.uint8)
    voted = np.zeros((h, w), dtype=bool)

    thetas = np.deg2rad(np.arange(180, dtype=np.float64))
    cos_t = np.cos(thetas)
    sin_t = np.sin(thetas)
    ndiag = int(math.ceil(math.hypot(h, w)))
    ncols = 2 * ndiag + 1
    accum = np.zeros(180 * ncols, dtype=np.int32)

    # Each point's quantized rho row is fixed, so compute the whole table
    # of flattened (theta, rho) accumulator indices up front (chunked to
    # bound the float64 intermediate) and keep a pixel -> point-index map
    # for the retirement pass. The voting loop then touches nothing but
    # the accumulator.
    row_base = np.arange(180, dtype=np.int64) * ncols
    ftab = np.empty((ys.size, 180), dtype=np.int64)
    for lo in range(0, ys.size, 8192):
        hi = min(lo + 8192, ys.size)
        rows = xs[lo:hi, None] * cos_t + ys[lo:hi, None] * sin_t
        ftab[lo:hi] = np.rint(rows).astype(np.int64) + ndiag + row_base
    pid = np.full((h, w), -1, dtype=np.int64)
    pid[ys, xs] = np.arange(ys.size)
    xs_l = xs.tolist()
    ys_l = ys.tolist()

    segments = []
    for idx in order.tolist():
        y = ys_l[idx]
        x = xs_l[idx]
        if not mask[y, x]:
            continue  # already swallowed by an earlier line
        fi = ftab[idx]
        votes = accum[fi]
        votes += 1
        accum[fi] = votes
        voted[y, x] = True
        best = int(votes.argmax())
        if votes[best] < threshold:
            continue

        ends, stepper = _trace_line(mask, x, y, -sin_t[best], cos_t[best],
                                    max_gap, w, h)
        (ex1, ey1), (ex2, ey2) = ends
        good = math.hypot(ex2 - ex1, ey2 - ey1) >= min_len

        # Retire the walked run whether or not it was long enough; undoing
        # the votes of retired pixels keeps the accumulator describing
        # only pixels that are still alive.
        for k in (0, 1):
            tx, ty = ends[k]
            for j, i in stepper(k):
                if mask[i, j]:
                    if voted[i, j]:
                        accum[ftab[pid[i, j]]] -= 1
                        voted[i, j] = False
                    mask[i, j] = 0
                if j == tx and i == ty:
                    break
        if good:
            segments.append(LineSegment(ex1, ey1, ex2, ey2))
    return segments


def _trace_line(mask, x, y, a, b, max_gap, w, h):
    """Walk from (x, y) along direction (a, b) over the mask, both ways.

    Returns the two run endpoints (gap runs longer than max_gap stop the
    walk) and a stepper that replays the same integer trajectory.
    """
    if abs(a) > abs(b):
        x_major = True
        dx0 = 1 if a > 0 else -1
        dy0 = round(b * (1 << _SHIFT) / abs(a))
        sx, sy = x, (y << _SHIFT) + _HALF
    else:
        x_major = False
        dy0 = 1 if b > 0 else -1
        dx0 = round(a * (1 << _SHIFT) / abs(b)) if b != 0 else 0
        sx, sy = (x << _SHIFT) + _HALF, y

    def positions(k):
        dx = dx0 if k == 0 else -dx0
        dy = dy0 if k == 0 else -dy0
        cx, cy = sx, sy
        while True:
            if x_major:
                j, i = cx, cy >> _SHIFT
            else:
                j, i = cx >> _SHIFT, cy
            if j < 0 or j >= w or i < 0 or i >= h:
                return
            yield j, i
            cx += dx
            cy += dy

    ends = []
    for k in (0, 1):
        gap = 0
        end = (x, y)
        for j, i in positions(k):
            if mask[i, j]:
                gap = 0
                end = (j, i)
            else:
                gap += 1
                if gap > max_gap:
                    break
        ends.append(end)
    return ends, positions


def filter_vertical(segments, tol: float = 2.0) -> list:
    """Keep segments whose endpoints differ in x by at most `tol` pixels."""
    if tol < 0:
        raise ValueError(f"tol must be >= 0, got {tol}")
    return [s for s in segments if abs(s.x1 - s.x2) <= tol]


def hough_average(segments, window: float = 20.0) -> ReferenceLine | None:
    """Average the densest cluster of segment x-midpoints.

    A window of width `window` slides over the sorted midpoints; the
    placement holding the most values wins, ties going first to the
    tighter cluster (smaller mean absolute deviation) and then to the
    smaller x. Returns None when there are no segments.
    """
    if window <= 0:
        raise ValueError(f"window must be positive, got {window}")
    if not segments:
        return None
    xs = np.sort(np.array([s.x_mid for s in segments], dtype=np.float64))
    n = xs.size
    best_key = None
    best = None
    j = 0
    for i in range(n):
        if j < i:
            j = i
        while j + 1 < n and xs[j + 1] <= xs[i] + window:
            j += 1
        cluster = xs[i:j + 1]
        # Work in offsets from the window minimum: differences of pixel
        # midpoints are exact, so translating every segment by an integer
        # shifts x_bar by exactly that integer.
        d = cluster - xs[i]
        m = d.mean()
        spread = np.abs(d - m).mean()
        key = (-(j - i + 1), spread, xs[i])
        if best_key is None or key < best_key:
            best_key = key
            best = (i, j, m)
    i, j, m = best
    return ReferenceLine(x_bar=float(xs[i] + m),
                         support_count=j - i + 1,
                         window=(float(xs[i]), float(xs[j])))
