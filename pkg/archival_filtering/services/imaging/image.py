# archival_filtering/services/imaging/image.py
# Goals: Image carriers shared by filters, noise and metrics.

from dataclasses import dataclass
from typing import Optional, TypeVar, Union
import logging

import numpy as np

from archival_filtering.models import ColorSpace

logger = logging.getLogger(__name__)

INTENSITY_MAX = 255.0


class UnsupportedImageError(ValueError):
    """File cannot be read as an 8-bit, 3-channel image."""


class ColorSpaceError(ValueError):
    """Operation received an image in the wrong color space."""


def _frozen(array: np.ndarray) -> np.ndarray:
    out = np.array(array, dtype=np.float64, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ColorImage:
    """H x W grid of 3-component real pixel vectors tagged with a color space.

    Pixels are stored as a read-only float64 array of shape (height, width, 3).
    """

    pixels: np.ndarray
    space: ColorSpace = ColorSpace.RGB

    def __post_init__(self):
        pixels = np.asarray(self.pixels)
        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ValueError(f"ColorImage needs shape (H, W, 3), got {pixels.shape}")
        if pixels.shape[0] < 1 or pixels.shape[1] < 1:
            raise ValueError("ColorImage needs at least one pixel")
        if not np.all(np.isfinite(pixels)):
            raise ValueError("ColorImage components must be finite")
        object.__setattr__(self, "pixels", _frozen(pixels))
        object.__setattr__(self, "space", ColorSpace(self.space))

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def size(self) -> int:
        return self.width * self.height

    def with_pixels(self, pixels: np.ndarray, space: Optional[ColorSpace] = None) -> "ColorImage":
        return ColorImage(pixels, space or self.space)

    def norms(self) -> np.ndarray:
        return pixel_norm(self.pixels)

    def require_space(self, space: ColorSpace) -> None:
        if self.space is not space:
            raise ColorSpaceError(f"expected a {space.value.upper()} image, got {self.space.value.upper()}")

    @classmethod
    def filled(cls, width: int, height: int, value, space: ColorSpace = ColorSpace.RGB) -> "ColorImage":
        pixels = np.empty((height, width, 3), dtype=np.float64)
        pixels[...] = value
        return cls(pixels, space)


@dataclass(frozen=True, eq=False)
class ScalarImage:
    """H x W map of non-negative reals, e.g. an edge magnitude."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise ValueError(f"ScalarImage needs a non-empty (H, W) array, got {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("ScalarImage values must be finite")
        if np.any(values < 0):
            raise ValueError("ScalarImage values must be non-negative")
        object.__setattr__(self, "values", _frozen(values))

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def size(self) -> int:
        return self.width * self.height


def pixel_norm(v) -> Union[float, np.ndarray]:
    """Euclidean norm of a pixel vector, or of every vector along the last axis."""
    arr = np.asarray(v, dtype=np.float64)
    if arr.shape[-1] != 3:
        raise ValueError(f"pixel vectors have 3 components, got shape {arr.shape}")
    norms = np.sqrt(np.sum(arr * arr, axis=-1))
    return float(norms) if norms.ndim == 0 else norms


ImageT = TypeVar("ImageT", ColorImage, ScalarImage)


def pad_replicate(img: ImageT, margin: int) -> ImageT:
    """Grow the image by `margin` pixels on every side, replicating edge pixels."""
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    if isinstance(img, ScalarImage):
        return ScalarImage(np.pad(img.values, margin, mode="edge"))
    padded = np.pad(img.pixels, ((margin, margin), (margin, margin), (0, 0)), mode="edge")
    return img.with_pixels(padded)
