"""Synthetic shaft scenes with a known wire position.

Every scene is a flat background plus a vertical lighting gradient,
optional crack polylines, an optional wide rope band, Gaussian pixel
noise, and the wire itself: a sub-pixel-positioned vertical stripe
rendered by exact column coverage. Everything is driven by the scene
seed, so identical SceneSpecs produce identical images bit for bit.
"""

import math
from dataclasses import dataclass

import numpy as np

# Crack rendering constants; crack geometry comes from crack_paths so a
# test can replay it, while appearance stays fixed.
_CRACK_CONTRAST = -0.16
_CRACK_WIDTH = 1.4


@dataclass(frozen=True)
class SceneSpec:
    """Everything needed to render one scene deterministically.

    rope is None or an (x, width, contrast) triple describing a vertical
    band; seed drives noise and crack geometry.
    """

    width: int
    height: int
    wire_x: float
    wire_width: float = 1.0
    wire_contrast: float = 0.5
    background_level: float = 0.45
    lighting_gradient: float = 0.08
    crack_count: int = 0
    rope: tuple | None = None
    noise_sigma: float = 0.02
    seed: int = 0


@dataclass(frozen=True)
class GroundTruth:
    """Reference answer for one generated scene."""

    wire_x: float
    present: bool = True


# Named corpus profiles, tuned so the preset pipelines separate cleanly.
# On "clean" both the smoothing and the frequency pipeline find the wire
# almost every time (the few faint cracks break up the frequency
# pipeline's ringing so its cluster vote stays centered). On
# "cracked+rope" the wire is faint enough that plain smoothing loses it
# more often than not, while the frequency pipeline's min-max rescale
# recovers it; the emboss pipeline collapses outright in the noise.
# "dark" starves every pipeline, pulling the frequency pipeline's hit
# rate far below its clean-profile rate.
PROFILES = {
    "clean": dict(wire_contrast=0.45, wire_width=1.0, background_level=0.45,
                  lighting_gradient=0.08, crack_count=3, rope=None,
                  noise_sigma=0.02),
    "cracked": dict(wire_contrast=0.35, wire_width=1.0, background_level=0.45,
                    lighting_gradient=0.08, crack_count=8, rope=None,
                    noise_sigma=0.022),
    "cracked+rope": dict(wire_contrast=0.2, wire_width=1.0,
                         background_level=0.45, lighting_gradient=0.08,
                         crack_count=4, rope=(16.0, 0.08),
                         noise_sigma=0.025),
    "dark": dict(wire_contrast=0.06, wire_width=1.0, background_level=0.10,
                 lighting_gradient=0.04, crack_count=3, rope=None,
                 noise_sigma=0.018),
}


def crack_paths(spec: SceneSpec) -> list:
    """Replayable crack geometry: a list of polylines (lists of (x, y)).

    The geometry depends only on seed and crack_count, so the same
    SceneSpec always yields the same paths. Cracks wander mostly
    sideways; their heading never comes within 25 degrees of vertical,
    which keeps them from mimicking the wire.
    """
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed).spawn(3)[1])
    paths = []
    for _ in range(spec.crack_count):
        x = rng.uniform(0.05 * spec.width, 0.95 * spec.width)
        y = rng.uniform(0.05 * spec.height, 0.95 * spec.height)
        heading = rng.uniform(-55.0, 55.0)
        direction = 1.0 if rng.uniform() < 0.5 else -1.0
        pts = [(x, y)]
        for _ in range(int(rng.integers(3, 8))):
            step = rng.uniform(15.0, 50.0)
            heading = float(np.clip(heading + rng.uniform(-35.0, 35.0),
                                    -65.0, 65.0))
            x += direction * step * math.cos(math.radians(heading))
            y += step * math.sin(math.radians(heading))
            pts.append((x, y))
        paths.append(pts)
    return paths


def generate(spec: SceneSpec):
    """Render one scene.

    Returns:
        (image, GroundTruth) where image is a (height, width) float64
        array clipped to [0, 1].
    """
    _validate(spec)
    h, w = spec.height, spec.width
    noise_seq = np.random.SeedSequence(spec.seed).spawn(3)[0]

    if h > 1:
        rows = np.arange(h, dtype=np.float64)[:, None] / (h - 1)
    else:
        rows = np.zeros((1, 1))
    img = np.full((h, w), spec.background_level, dtype=np.float64)
    img += spec.lighting_gradient * rows

    for path in crack_paths(spec):
        for p0, p1 in zip(path[:-1], path[1:]):
            _stamp_segment(img, p0, p1, _CRACK_CONTRAST, _CRACK_WIDTH)

    if spec.rope is not None:
        rope_x, rope_w, rope_c = spec.rope
        img += rope_c * _band_coverage(w, rope_x, rope_w)[None, :]

    img += spec.wire_contrast * _band_coverage(w, spec.wire_x,
                                               spec.wire_width)[None, :]

    if spec.noise_sigma > 0:
        rng = np.random.default_rng(noise_seq)
        img += rng.normal(0.0, spec.noise_sigma, size=(h, w))

    np.clip(img, 0.0, 1.0, out=img)
    return img, GroundTruth(wire_x=spec.wire_x, present=True)


def make_corpus(profile: str, n: int, seed: int,
                width: int = 512, height: int = 384) -> list:
    """Generate n scenes of a named profile.

    The wire lands uniformly in the central 60% of the width; each image
    gets its own seed (seed*100000 + index) so corpora can be regenerated
    piecewise. Returns a list of (image, GroundTruth) pairs.
    """
    if profile not in PROFILES:
        raise ValueError(
            f"unknown profile {profile!r}; valid: {', '.join(sorted(PROFILES))}"
        )
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    params = dict(PROFILES[profile])
    rope_shape = params.pop("rope")
    layout = np.random.default_rng(seed)
    corpus = []
    for i in range(n):
        wire_x = float(layout.uniform(0.2 * width, 0.8 * width))
        rope = None
        if rope_shape is not None:
            rope_w, rope_c = rope_shape
            clearance = rope_w / 2.0 + 15.0
            while True:
                rope_x = float(layout.uniform(0.05 * width, 0.95 * width))
                if abs(rope_x - wire_x) > clearance:
                    break
            rope = (rope_x, rope_w, rope_c)
        spec = SceneSpec(width=width, height=height, wire_x=wire_x,
                         rope=rope, seed=seed * 100000 + i, **params)
        corpus.append(generate(spec))
    return corpus


def _band_coverage(width: int, center: float, band_width: float) -> np.ndarray:
    """Per-column overlap of [center - bw/2, center + bw/2] with each pixel."""
    cols = np.arange(width, dtype=np.float64)
    left = center - band_width / 2.0
    right = center + band_width / 2.0
    return np.clip(np.minimum(right, cols + 0.5) - np.maximum(left, cols - 0.5),
                   0.0, 1.0)


def _stamp_segment(img, p0, p1, value, width) -> None:
    """Add `value` times an anti-aliased thick-segment coverage to img."""
    h, w = img.shape
    x0, y0 = p0
    x1, y1 = p1
    pad = width / 2.0 + 1.0
    xmin = max(int(math.floor(min(x0, x1) - pad)), 0)
    xmax = min(int(math.ceil(max(x0, x1) + pad)), w - 1)
    ymin = max(int(math.floor(min(y0, y1) - pad)), 0)
    ymax = min(int(math.ceil(max(y0, y1) + pad)), h - 1)
    if xmin > xmax or ymin > ymax:
        return
    xs = np.arange(xmin, xmax + 1, dtype=np.float64)[None, :]
    ys = np.arange(ymin, ymax + 1, dtype=np.float64)[:, None]
    dx = x1 - x0
    dy = y1 - y0
    seg_len2 = dx * dx + dy * dy
    if seg_len2 == 0.0:
        dist = np.hypot(xs - x0, ys - y0)
    else:
        t = np.clip(((xs - x0) * dx + (ys - y0) * dy) / seg_len2, 0.0, 1.0)
        dist = np.hypot(xs - (x0 + t * dx), ys - (y0 + t * dy))
    cover = np.clip(width / 2.0 + 0.5 - dist, 0.0, 1.0)
    img[ymin:ymax + 1, xmin:xmax + 1] += value * cover


def _validate(spec: SceneSpec) -> None:
    if spec.width < 8 or spec.height < 8:
        raise ValueError(f"scene must be at least 8x8, got "
                         f"{spec.width}x{spec.height}")
    if not 0.0 <= spec.wire_x <= spec.width - 1:
        raise ValueError(f"wire_x {spec.wire_x} outside [0, {spec.width - 1}]")
    if spec.wire_width < 1.0:
        raise ValueError(f"wire_width must be >= 1, got {spec.wire_width}")
    if spec.noise_sigma < 0:
        raise ValueError(f"noise_sigma must be >= 0, got {spec.noise_sigma}")
    if spec.crack_count < 0:
        raise ValueError(f"crack_count must be >= 0, got {spec.crack_count}")
    if spec.rope is not None:
        if len(spec.rope) != 3:
            raise ValueError("rope must be (x, width, contrast)")
        if spec.rope[1] <= 0:
            raise ValueError(f"rope width must be positive, got {spec.rope[1]}")
