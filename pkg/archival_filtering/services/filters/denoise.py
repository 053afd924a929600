# archival_filtering/services/filters/denoise.py
# Goals: Mean and median filters under the marginal and vector approaches.

from typing import Union

import numpy as np
from scipy import ndimage

from archival_filtering.models import Approach, FilterKind
from archival_filtering.services.imaging import ColorImage
from .base import MEDIAN_RANK, DenoiseFilter, extract_windows, rank_select

# 3x3 over rows and columns, one channel at a time
CHANNEL_FOOTPRINT = (3, 3, 1)
MEAN_KERNEL = np.full(CHANNEL_FOOTPRINT, 1.0 / 9.0)


class MeanFilter(DenoiseFilter):
    """Unweighted 3x3 mean. Both approaches reduce to the same centroid."""

    kind = FilterKind.MEAN

    def marginal(self, img: ColorImage) -> ColorImage:
        out = ndimage.correlate(img.pixels, MEAN_KERNEL, mode="nearest")
        return img.with_pixels(out)

    def vector(self, img: ColorImage) -> ColorImage:
        # centroid of the nine window vectors, all weights 1
        return img.with_pixels(extract_windows(img).mean(axis=2))


class MedianFilter(DenoiseFilter):
    """3x3 median; the vector form keeps the sample whose norm is the median norm."""

    kind = FilterKind.MEDIAN
    approaches = tuple(Approach)

    def marginal(self, img: ColorImage) -> ColorImage:
        out = ndimage.median_filter(img.pixels, size=CHANNEL_FOOTPRINT, mode="nearest")
        return img.with_pixels(out)

    def vector(self, img: ColorImage) -> ColorImage:
        return img.with_pixels(rank_select(img, MEDIAN_RANK))


def mean_filter(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    return MeanFilter().apply(img, approach)


def median_filter(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    return MedianFilter().apply(img, approach)
