"""Reading and writing images: 8-bit PNG (gray or RGB) and binary PGM (P5).

Loading maps byte b to b/255.0; saving clamps to [0, 1] and rounds to the
nearest byte, so a save/load round trip moves no pixel by more than 1/255.
"""

import io

import numpy as np
from PIL import Image as _PILImage
from PIL import UnidentifiedImageError

from .image import as_image, to_gray

_PNG_MAGIC = b"\x89PNG\r\n\x1a\n"


class ImageFileError(Exception):
    """Base class for image file problems."""


class UnreadableFileError(ImageFileError):
    """The file could not be opened or read at all."""


class UnsupportedFormatError(ImageFileError):
    """The file is readable but not an 8-bit PNG or binary PGM."""


class CorruptImageError(ImageFileError):
    """The file claims a supported format but its contents do not parse."""


def load_image(path) -> np.ndarray:
    """Load an 8-bit PNG (gray or RGB) or binary PGM as a gray image.

    RGB input is collapsed with the default luma weights right away; the
    rest of the library only ever sees single-channel data.
    """
    path = str(path)
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as e:
        raise UnreadableFileError(f"{path}: {e.strerror or e}") from e

    if data[:8] == _PNG_MAGIC:
        return _decode_png(data, path)
    if data[:2] == b"P5":
        return _decode_pgm(data, path)
    if data[:2] in (b"P1", b"P2", b"P3", b"P4", b"P6"):
        raise UnsupportedFormatError(
            f"{path}: only binary PGM (P5) is supported among the PNM formats"
        )
    raise UnsupportedFormatError(f"{path}: not a PNG or binary PGM file")


def save_image(img, path) -> None:
    """Write a gray image as 8-bit PNG or binary PGM, chosen by extension."""
    img = as_image(img)
    path = str(path)
    data = np.rint(np.clip(img, 0.0, 1.0) * 255.0).astype(np.uint8)
    lower = path.lower()
    if lower.endswith(".png"):
        _PILImage.fromarray(data, mode="L").save(path, format="PNG")
    elif lower.endswith(".pgm"):
        header = f"P5\n{data.shape[1]} {data.shape[0]}\n255\n".encode("ascii")
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(data.tobytes())
    else:
        raise UnsupportedFormatError(
            f"{path}: unsupported output extension (use .png or .pgm)"
        )


def save_rgb(rgb, path) -> None:
    """Write an (H, W, 3) array in [0, 1] as an 8-bit RGB PNG."""
    arr = np.asarray(rgb, dtype=np.float64)
    if arr.ndim != 3 or arr.shape[2] != 3:
        raise ValueError(f"expected an (H, W, 3) array, got shape {arr.shape}")
    data = np.rint(np.clip(arr, 0.0, 1.0) * 255.0).astype(np.uint8)
    _PILImage.fromarray(data, mode="RGB").save(str(path), format="PNG")


def _decode_png(data: bytes, path: str) -> np.ndarray:
    try:
        with _PILImage.open(io.BytesIO(data)) as im:
            im.load()
            mode = im.mode
            if mode == "L":
                return np.asarray(im, dtype=np.uint8) / 255.0
            if mode == "RGB":
                return to_gray(np.asarray(im, dtype=np.uint8) / 255.0)
            raise UnsupportedFormatError(
                f"{path}: PNG mode {mode!r} unsupported (need 8-bit gray or RGB)"
            )
    except UnidentifiedImageError as e:
        raise CorruptImageError(f"{path}: PNG data does not decode") from e
    except (OSError, SyntaxError, ValueError) as e:
        raise CorruptImageError(f"{path}: truncated or corrupt PNG ({e})") from e


def _decode_pgm(data: bytes, path: str) -> np.ndarray:
    pos = 2
    fields = []
    while len(fields) < 3:
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch == b"#":
                nl = data.find(b"\n", pos)
                pos = len(data) if nl < 0 else nl + 1
            elif ch.isspace():
                pos += 1
            else:
                break
        start = pos
        while pos < len(data):
            ch = data[pos:pos + 1]
            if ch.isspace() or ch == b"#":
                break
            pos += 1
        token = data[start:pos]
        if not token:
            raise CorruptImageError(f"{path}: truncated PGM header")
        if not token.isdigit():
            raise CorruptImageError(f"{path}: malformed PGM header token {token!r}")
        fields.append(int(token))
    width, height, maxval = fields
    if width <= 0 or height <= 0:
        raise CorruptImageError(f"{path}: non-positive PGM dimensions")
    if maxval != 255:
        raise UnsupportedFormatError(
            f"{path}: PGM maxval {maxval} unsupported (must be 255)"
        )
    pos += 1  # exactly one whitespace byte separates header and pixels
    pixels = data[pos:pos + width * height]
    if len(pixels) < width * height:
        raise CorruptImageError(f"{path}: PGM pixel data truncated")
    return (
        np.frombuffer(pixels, dtype=np.uint8).reshape(height, width) / 255.0
    )
