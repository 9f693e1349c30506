"""Detection pipelines: configuration, named presets, and execution.

A pipeline is undistort (optional), crop (optional), an ordered list of
preprocessing stages, Canny, the probabilistic Hough transform, the
vertical filter, and the windowed x-average. Four named preprocessing
recipes ship built in:

    GCH   gaussian
    GSCH  gaussian + sharpen
    GECH  gaussian + emboss
    FCH   frequency-domain high-pass only

plus per-dataset threshold bundles (LtoL, LtoR, RtoL, RtoR) that adjust
the high-pass radius and the minimum line length for the four capture
sessions those names refer to.
"""

import json
import time
from dataclasses import dataclass, field

import numpy as np

from .calibration import CAMERA_PRESETS, CameraModel, RegionOfInterest, \
    roi_crop, undistort
from .denoise import DEFAULT_EMBOSS_KERNEL, emboss, fft_highpass, \
    gaussian_blur, sharpen
from .edge import canny
from .lines import filter_vertical, hough_average, hough_segments


class ConfigError(ValueError):
    """A pipeline configuration that cannot be built as requested."""


class PipelineStageError(Exception):
    """A stage failed; carries which one."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class GaussianStage:
    size: int = 5
    sigma: float | None = None
    name: str = field(default="gaussian", init=False)

    def apply(self, img):
        return gaussian_blur(img, self.size, self.sigma)


@dataclass
class SharpenStage:
    center: float = 5.0
    name: str = field(default="sharpen", init=False)

    def apply(self, img):
        return sharpen(img, self.center)


@dataclass
class EmbossStage:
    kernel: tuple = tuple(map(tuple, DEFAULT_EMBOSS_KERNEL.tolist()))
    name: str = field(default="emboss", init=False)

    def apply(self, img):
        return emboss(img, np.asarray(self.kernel, dtype=np.float64))


@dataclass
class FourierStage:
    radius: float = 40.0
    name: str = field(default="fourier", init=False)

    def apply(self, img):
        return fft_highpass(img, self.radius)


_STAGE_KINDS = {
    "gaussian": GaussianStage,
    "sharpen": SharpenStage,
    "emboss": EmbossStage,
    "fourier": FourierStage,
}

# Canonical stage layout of each named recipe; a named config must keep it.
PRESET_STAGES = {
    "GCH": ("gaussian",),
    "GSCH": ("gaussian", "sharpen"),
    "GECH": ("gaussian", "emboss"),
    "FCH": ("fourier",),
}

# Gaussian kernel edge per named recipe.
_PRESET_GAUSSIAN_SIZE = {"GCH": 5, "GSCH": 7, "GECH": 5}

# Capture-session bundles: high-pass radius and minimum line length.
DATASET_BUNDLES = {
    "LtoL": {"fourier_mask_radius": 500.0, "min_line_length": 50},
    "LtoR": {"fourier_mask_radius": 40.0, "min_line_length": 160},
    "RtoL": {"fourier_mask_radius": 400.0, "min_line_length": 50},
    "RtoR": {"fourier_mask_radius": 200.0, "min_line_length": 150},
}


@dataclass
class PipelineConfig:
    """Full recipe for one detection run."""

    name: str
    preprocessing: list
    canny_low: float = 1.0
    canny_high: float = 100.0
    hough_threshold: int = 100
    min_line_length: float = 50
    max_line_gap: float = 10
    vertical_tol: float = 2.0
    cluster_window: float = 20.0
    camera: CameraModel | None = None
    roi: RegionOfInterest | None = None

    def __post_init__(self):
        if self.name in PRESET_STAGES:
            kinds = tuple(s.name for s in self.preprocessing)
            if kinds != PRESET_STAGES[self.name]:
                raise ConfigError(
                    f"config named {self.name!r} must use preprocessing "
                    f"{PRESET_STAGES[self.name]}, got {kinds}"
                )


@dataclass
class DetectionResult:
    """Output of one pipeline run.

    reference is None when nothing was detected; segments holds the
    vertical segments the reference was averaged from; stage_timings is
    an ordered list of (stage name, seconds).
    """

    reference: object
    segments: list
    stage_timings: list

    @property
    def total_seconds(self) -> float:
        return sum(t for _, t in self.stage_timings)


def named_config(name: str, dataset: str | None = None,
                 **overrides) -> PipelineConfig:
    """Build one of the four named recipes, optionally with a dataset bundle.

    Keyword overrides map onto PipelineConfig fields plus the stage knobs
    gaussian_size, gaussian_sigma, sharpen_center, emboss_kernel and
    fourier_mask_radius.
    """
    if name not in PRESET_STAGES:
        raise ConfigError(
            f"unknown preset {name!r}; valid: {', '.join(sorted(PRESET_STAGES))}"
        )
    params = {}
    if dataset is not None:
        if dataset not in DATASET_BUNDLES:
            raise ConfigError(
                f"unknown dataset {dataset!r}; valid: "
                f"{', '.join(sorted(DATASET_BUNDLES))}"
            )
        params.update(DATASET_BUNDLES[dataset])
    params.update(overrides)

    stage_args = {
        "gaussian_size": ("gaussian", "size"),
        "gaussian_sigma": ("gaussian", "sigma"),
        "sharpen_center": ("sharpen", "center"),
        "emboss_kernel": ("emboss", "kernel"),
        "fourier_mask_radius": ("fourier", "radius"),
    }
    per_stage = {}
    for key in list(params):
        if key in stage_args:
            kind, attr = stage_args[key]
            per_stage.setdefault(kind, {})[attr] = params.pop(key)

    stages = []
    for kind in PRESET_STAGES[name]:
        kwargs = per_stage.pop(kind, {})
        if kind == "gaussian" and "size" not in kwargs:
            kwargs["size"] = _PRESET_GAUSSIAN_SIZE[name]
        if kind == "emboss" and "kernel" in kwargs:
            kwargs["kernel"] = tuple(map(tuple, kwargs["kernel"]))
        stages.append(_STAGE_KINDS[kind](**kwargs))
    if per_stage:
        raise ConfigError(
            f"parameters {sorted(per_stage)} do not apply to preset {name}"
        )
    try:
        return PipelineConfig(name=name, preprocessing=stages, **params)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def config_from_dict(d: dict) -> PipelineConfig:
    """Build a PipelineConfig from parsed JSON.

    A "name" matching one of the presets expands it (with an optional
    "dataset" bundle); any other name needs an explicit "preprocessing"
    list of stage kinds. Flat keys like gaussian_size or canny_low tune
    the stages and thresholds; "camera" takes a preset name or an object
    with fx, fy, cx, cy and dist; "roi" takes x0, y0, width, height.
    """
    if not isinstance(d, dict):
        raise ConfigError(f"config must be a JSON object, got {type(d).__name__}")
    d = dict(d)
    name = d.pop("name", None)
    dataset = d.pop("dataset", None)

    camera = d.pop("camera", None)
    if isinstance(camera, str):
        if camera not in CAMERA_PRESETS:
            raise ConfigError(
                f"unknown camera preset {camera!r}; valid: "
                f"{', '.join(sorted(CAMERA_PRESETS))}"
            )
        camera = CAMERA_PRESETS[camera]
    elif camera is not None:
        try:
            camera = CameraModel.from_dict(camera)
        except ValueError as e:
            raise ConfigError(str(e)) from e

    roi = d.pop("roi", None)
    if roi is not None:
        try:
            roi = RegionOfInterest(int(roi["x0"]), int(roi["y0"]),
                                   int(roi["width"]), int(roi["height"]))
        except (KeyError, TypeError, ValueError) as e:
            raise ConfigError(f"bad roi: {e}") from e

    if name in PRESET_STAGES:
        listed = d.pop("preprocessing", None)
        if listed is not None and tuple(listed) != PRESET_STAGES[name]:
            raise ConfigError(
                f"config named {name!r} must use preprocessing "
                f"{list(PRESET_STAGES[name])}, got {list(listed)}"
            )
        try:
            return named_config(name, dataset=dataset, camera=camera,
                                roi=roi, **d)
        except TypeError as e:
            raise ConfigError(str(e)) from e

    if name is None:
        raise ConfigError("config needs a \"name\"")
    if dataset is not None:
        raise ConfigError("\"dataset\" bundles apply only to named presets")
    kinds = d.pop("preprocessing", None)
    if kinds is None:
        raise ConfigError(
            f"config {name!r} is not a preset, so it needs a "
            "\"preprocessing\" list"
        )
    stage_keys = {
        "gaussian_size": ("gaussian", "size"),
        "gaussian_sigma": ("gaussian", "sigma"),
        "sharpen_center": ("sharpen", "center"),
        "emboss_kernel": ("emboss", "kernel"),
        "fourier_mask_radius": ("fourier", "radius"),
    }
    per_stage = {}
    for key in list(d):
        if key in stage_keys:
            kind, attr = stage_keys[key]
            per_stage.setdefault(kind, {})[attr] = d.pop(key)
    stages = []
    for kind in kinds:
        if kind not in _STAGE_KINDS:
            raise ConfigError(
                f"unknown stage {kind!r}; valid: "
                f"{', '.join(sorted(_STAGE_KINDS))}"
            )
        kwargs = dict(per_stage.get(kind, {}))
        if kind == "emboss" and "kernel" in kwargs:
            kwargs["kernel"] = tuple(map(tuple, kwargs["kernel"]))
        stages.append(_STAGE_KINDS[kind](**kwargs))
    try:
        return PipelineConfig(name=name, preprocessing=stages, camera=camera,
                              roi=roi, **d)
    except TypeError as e:
        raise ConfigError(str(e)) from e


def load_config(path) -> PipelineConfig:
    """Load a pipeline config from a JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: not valid JSON ({e})") from e
    return config_from_dict(data)


def run_pipeline(cfg: PipelineConfig, img) -> DetectionResult:
    """Run every stage in order, timing each.

    Stage failures are re-raised as PipelineStageError so the caller can
    tell which stage fell over.
    """
    timings = []

    def step(stage_name, fn, *args):
        t0 = time.perf_counter()
        try:
            out = fn(*args)
        except PipelineStageError:
            raise
        except Exception as e:
            raise PipelineStageError(stage_name, e) from e
        timings.append((stage_name, time.perf_counter() - t0))
        return out

    x = img
    if cfg.camera is not None:
        x = step("undistort", undistort, x, cfg.camera)
    if cfg.roi is not None:
        x = step("roi", roi_crop, x, cfg.roi)
    for stage in cfg.preprocessing:
        x = step(stage.name, stage.apply, x)
    edges = step("canny", canny, x, cfg.canny_low, cfg.canny_high)
    segments = step("hough", hough_segments, edges, cfg.hough_threshold,
                    cfg.min_line_length, cfg.max_line_gap)
    vertical = step("vertical_filter", filter_vertical, segments,
                    cfg.vertical_tol)
    reference = step("hough_average", hough_average, vertical,
                     cfg.cluster_window)
    return DetectionResult(reference=reference, segments=vertical,
                           stage_timings=timings)
