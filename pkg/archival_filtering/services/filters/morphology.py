# archival_filtering/services/filters/morphology.py
# Goals: Flat 3x3 erosion/dilation and their compositions, marginal and vector.

from typing import Union

from scipy import ndimage

from archival_filtering.models import Approach, FilterKind
from archival_filtering.services.imaging import ColorImage
from .base import SINGLE_APPROACHES, DenoiseFilter, extreme_select
from .denoise import CHANNEL_FOOTPRINT


def _single(approach: Union[Approach, str]) -> Approach:
    approach = Approach(approach)
    if approach not in SINGLE_APPROACHES:
        raise ValueError(f"morphological operators take the marginal or vector approach, got {approach.value}")
    return approach


def erode(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    """Per-channel minimum (marginal) or minimum-norm sample (vector)."""
    if _single(approach) is Approach.MARGINAL:
        return img.with_pixels(ndimage.minimum_filter(img.pixels, size=CHANNEL_FOOTPRINT, mode="nearest"))
    return img.with_pixels(extreme_select(img, largest=False))


def dilate(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    """Per-channel maximum (marginal) or maximum-norm sample (vector)."""
    if _single(approach) is Approach.MARGINAL:
        return img.with_pixels(ndimage.maximum_filter(img.pixels, size=CHANNEL_FOOTPRINT, mode="nearest"))
    return img.with_pixels(extreme_select(img, largest=True))


def opening(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    return dilate(erode(img, approach), approach)


def closing(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    return erode(dilate(img, approach), approach)


class MorphDenoiseFilter(DenoiseFilter):
    """opening(closing(image)) with a flat 3x3 square."""

    kind = FilterKind.MORPH_DENOISE
    approaches = tuple(Approach)

    def marginal(self, img: ColorImage) -> ColorImage:
        return opening(closing(img, Approach.MARGINAL), Approach.MARGINAL)

    def vector(self, img: ColorImage) -> ColorImage:
        return opening(closing(img, Approach.VECTOR), Approach.VECTOR)


def morph_denoise(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ColorImage:
    return MorphDenoiseFilter().apply(img, approach)
