"""Thin vertical line detection for noisy greyscale imagery."""

from .calibration import CAMERA_PRESETS, CameraModel, RegionOfInterest, \
    roi_crop, undistort
from .denoise import emboss, fft_highpass, gaussian_blur, sharpen
from .edge import canny, sobel_gradients
from .evaluate import EvalReport, EvalRow, evaluate, read_report, \
    write_report
from .imageio import ImageFileError, load_image, save_image
from .lines import LineSegment, ReferenceLine, filter_vertical, \
    hough_average, hough_segments
from .pipeline import ConfigError, DetectionResult, PipelineConfig, \
    PipelineStageError, config_from_dict, load_config, named_config, \
    run_pipeline
from .synth import PROFILES, GroundTruth, SceneSpec, generate, make_corpus

__version__ = "0.1.0"

__all__ = [
    "CAMERA_PRESETS",
    "CameraModel",
    "ConfigError",
    "DetectionResult",
    "EvalReport",
    "EvalRow",
    "GroundTruth",
    "ImageFileError",
    "LineSegment",
    "PROFILES",
    "PipelineConfig",
    "PipelineStageError",
    "ReferenceLine",
    "RegionOfInterest",
    "SceneSpec",
    "__version__",
    "canny",
    "config_from_dict",
    "emboss",
    "evaluate",
    "fft_highpass",
    "filter_vertical",
    "gaussian_blur",
    "generate",
    "hough_average",
    "hough_segments",
    "load_config",
    "load_image",
    "make_corpus",
    "named_config",
    "read_report",
    "roi_crop",
    "run_pipeline",
    "save_image",
    "sharpen",
    "sobel_gradients",
    "undistort",
    "write_report",
]
