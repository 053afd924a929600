# archival_filtering/services/filters/base.py
# Goals: Filter stack base classes and the 3x3 window layout shared by all filters.

from abc import abstractmethod
from typing import ClassVar, Dict, Optional, Tuple, Union
import logging

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from archival_filtering.core.metaclasses import FilterStackMeta
from archival_filtering.models import Approach, FilterKind
from archival_filtering.services.imaging import ColorImage, ScalarImage, pad_replicate, pixel_norm

logger = logging.getLogger(__name__)

# a b c
# d e f
# g h i
WINDOW_LABELS = "abcdefghi"
CENTER = WINDOW_LABELS.index("e")
MEDIAN_RANK = 4

SINGLE_APPROACHES = (Approach.MARGINAL, Approach.VECTOR)


def extract_windows(img: ColorImage) -> np.ndarray:
    """Every pixel's replicate-padded 3x3 neighbourhood as an (H, W, 9, 3) array in raster order."""
    padded = pad_replicate(img, 1).pixels
    view = sliding_window_view(padded, (3, 3), axis=(0, 1))  # (H, W, 3, 3, 3)
    return np.moveaxis(view, 2, -1).reshape(img.height, img.width, 9, 3)


def window_at(img: ColorImage, row: int, col: int) -> Dict[str, np.ndarray]:
    """The labelled window a..i around one pixel."""
    samples = extract_windows(img)[row, col]
    return {label: samples[k].copy() for k, label in enumerate(WINDOW_LABELS)}


def window_norms(img: ColorImage) -> Tuple[np.ndarray, np.ndarray]:
    """Replicate-padded pixels and the (H, W, 9) sample norms of every window.

    Each pixel norm is computed once; the windows only view the norm map.
    """
    padded = pad_replicate(img, 1).pixels
    norms = sliding_window_view(pixel_norm(padded), (3, 3)).reshape(img.height, img.width, 9)
    return padded, norms


def select_by_norm(padded: np.ndarray, index: np.ndarray) -> np.ndarray:
    """Pick, per pixel, window sample `index` (H, W) straight from the padded pixels."""
    height, width = index.shape
    dr, dc = np.divmod(index, 3)
    return padded[np.arange(height)[:, None] + dr, np.arange(width)[None, :] + dc]


def rank_select(img: ColorImage, rank: int) -> np.ndarray:
    """Sample whose norm has the given rank; equal norms keep raster order."""
    padded, norms = window_norms(img)
    order = np.argsort(norms, axis=-1, kind="stable")
    return select_by_norm(padded, order[..., rank])


def extreme_select(img: ColorImage, largest: bool) -> np.ndarray:
    """Minimum- or maximum-norm sample; the first in raster order wins ties."""
    padded, norms = window_norms(img)
    index = np.argmax(norms, axis=-1) if largest else np.argmin(norms, axis=-1)
    return select_by_norm(padded, index)


class FilterStack(metaclass=FilterStackMeta):
    """A 3x3 filter available under the marginal and vector approaches."""

    kind: ClassVar[Optional[FilterKind]] = None
    approaches: ClassVar[Tuple[Approach, ...]] = SINGLE_APPROACHES

    def check_approach(self, approach: Union[Approach, str]) -> Approach:
        approach = Approach(approach)
        if approach not in self.approaches:
            allowed = ", ".join(a.value for a in self.approaches)
            raise ValueError(f"{self.kind.value} does not support approach {approach.value} (allowed: {allowed})")
        return approach

    @abstractmethod
    def marginal(self, img: ColorImage):
        """Filter each channel independently."""

    @abstractmethod
    def vector(self, img: ColorImage):
        """Filter pixel vectors as a whole."""

    def apply(self, img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL):
        approach = self.check_approach(approach)
        result = img
        for single in approach.passes:
            result = self.marginal(result) if single is Approach.MARGINAL else self.vector(result)
        return result


class DenoiseFilter(FilterStack):
    """Filter producing a ColorImage."""

    def apply(self, img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
        return super().apply(img, approach)


class EdgeFilter(FilterStack):
    """Filter producing a ScalarImage edge magnitude; raw values, never clamped."""

    def apply(self, img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ScalarImage:
        return super().apply(img, approach)
