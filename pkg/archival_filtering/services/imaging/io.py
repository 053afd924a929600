# archival_filtering/services/imaging/io.py
# Goals: Load and save 8-bit RGB PNG / binary PPM (P6) images; write edge maps as PNG / PGM (P5).

import logging
import re
from pathlib import Path
from typing import Dict, Union

import numpy as np
from PIL import Image, UnidentifiedImageError

from archival_filtering.models import ColorSpace
from .image import INTENSITY_MAX, ColorImage, ScalarImage, UnsupportedImageError

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"
PNG_TRUECOLOR = 2
# Pillow writes P6 for RGB and P5 for grayscale under its PPM format
COLOR_SUFFIXES = {".png": "PNG", ".ppm": "PPM", ".pnm": "PPM"}
GRAY_SUFFIXES = {".png": "PNG", ".pgm": "PPM", ".pnm": "PPM"}

# magic, width, height, maxval; comments stripped beforehand
_PNM_HEADER = re.compile(rb"^(P[1-7])\s+(\d+)\s+(\d+)\s+(\d+)")


def _check_png_header(head: bytes, path: Path) -> None:
    if len(head) < 26 or head[12:16] != b"IHDR":
        raise UnsupportedImageError(f"{path}: truncated PNG header")
    bit_depth, color_type = head[24], head[25]
    if bit_depth != 8:
        raise UnsupportedImageError(f"{path}: unsupported bit depth {bit_depth} (8-bit only)")
    if color_type != PNG_TRUECOLOR:
        raise UnsupportedImageError(f"{path}: PNG color type {color_type} is not 3-channel RGB")


def _check_pnm_header(head: bytes, path: Path) -> None:
    stripped = re.sub(rb"#[^\n]*\n", b"\n", head)
    match = _PNM_HEADER.match(stripped)
    if not match:
        raise UnsupportedImageError(f"{path}: malformed PNM header")
    magic, maxval = match.group(1), int(match.group(4))
    if magic != b"P6":
        raise UnsupportedImageError(f"{path}: only binary PPM (P6) is supported, got {magic.decode()}")
    if maxval != 255:
        raise UnsupportedImageError(f"{path}: unsupported PPM maxval {maxval} (8-bit only)")


def load_image(path: PathLike) -> ColorImage:
    """Read an 8-bit, 3-channel PNG or P6 PPM as an RGB ColorImage."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"Image not found: {path}")

    with open(path, "rb") as f:
        head = f.read(512)

    if head.startswith(PNG_SIGNATURE):
        _check_png_header(head, path)
    elif head[:1] == b"P":
        _check_pnm_header(head, path)
    else:
        raise UnsupportedImageError(f"{path}: not a PNG or PPM file")

    try:
        with Image.open(path) as pil_image:
            pil_image.load()
            if pil_image.mode != "RGB":
                raise UnsupportedImageError(f"{path}: image mode {pil_image.mode} is not 8-bit RGB")
            array = np.asarray(pil_image, dtype=np.uint8)
    except (UnidentifiedImageError, OSError) as e:
        raise UnsupportedImageError(f"{path}: unreadable image ({e})") from e

    logger.debug(f"Loaded {path} ({array.shape[1]}x{array.shape[0]})")
    return ColorImage(array.astype(np.float64), ColorSpace.RGB)


def _format_for(path: Path, suffixes: Dict[str, str]) -> str:
    try:
        return suffixes[path.suffix.lower()]
    except KeyError:
        allowed = " or ".join(suffixes)
        raise UnsupportedImageError(f"{path}: unsupported output format (use {allowed})") from None


def quantize(values: np.ndarray) -> np.ndarray:
    """Clamp to [0, 255] and round to the nearest 8-bit level."""
    return np.rint(np.clip(values, 0.0, INTENSITY_MAX)).astype(np.uint8)


def save_image(img: ColorImage, path: PathLike) -> None:
    """Write an RGB image as 8-bit PNG or PPM."""
    path = Path(path)
    img.require_space(ColorSpace.RGB)
    fmt = _format_for(path, COLOR_SUFFIXES)
    Image.fromarray(quantize(img.pixels)).save(path, format=fmt)
    logger.debug(f"Saved {path}")


def save_scalar_image(img: ScalarImage, path: PathLike) -> float:
    """Write an edge map as 8-bit grayscale PNG or PGM after linear rescale to [0, 255].

    Returns the scale factor applied to the raw values.
    """
    path = Path(path)
    fmt = _format_for(path, GRAY_SUFFIXES)
    peak = float(img.values.max())
    scale = INTENSITY_MAX / peak if peak > 0 else 1.0
    Image.fromarray(quantize(img.values * scale)).save(path, format=fmt)
    return scale
