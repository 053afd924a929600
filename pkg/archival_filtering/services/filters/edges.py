# archival_filtering/services/filters/edges.py
# Goals: Laplacian, Sobel and morphological-gradient edge magnitudes.

from typing import Union
import logging

import numpy as np
from scipy import ndimage

from archival_filtering.models import Approach, FilterKind
from archival_filtering.services.imaging import ColorImage, ScalarImage, pad_replicate, pixel_norm
from .base import EdgeFilter, select_by_norm, window_norms
from .morphology import dilate, erode

logger = logging.getLogger(__name__)

LAPLACIAN_KERNEL = np.array([[0, 1, 0],
                             [1, -4, 1],
                             [0, 1, 0]], dtype=np.float64)

SOBEL_H = np.array([[-1, 0, 1],
                    [-2, 0, 2],
                    [-1, 0, 1]], dtype=np.float64)

SOBEL_V = np.array([[-1, -2, -1],
                    [0, 0, 0],
                    [1, 2, 1]], dtype=np.float64)


def _per_channel(pixels: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    return ndimage.correlate(pixels, kernel[:, :, None], mode="nearest")


class LaplacianFilter(EdgeFilter):
    kind = FilterKind.LAPLACIAN

    def marginal(self, img: ColorImage) -> ScalarImage:
        """Kernel response per channel, then the Euclidean norm across channels."""
        return ScalarImage(pixel_norm(_per_channel(img.pixels, LAPLACIAN_KERNEL)))

    def vector(self, img: ColorImage) -> ScalarImage:
        """Root of the squared differences to the four 4-neighbours, summed over channels."""
        p = pad_replicate(img, 1).pixels
        center = img.pixels
        neighbours = (p[:-2, 1:-1], p[2:, 1:-1], p[1:-1, :-2], p[1:-1, 2:])
        energy = sum(np.sum((n - center) ** 2, axis=-1) for n in neighbours)
        return ScalarImage(np.sqrt(energy))


class SobelFilter(EdgeFilter):
    kind = FilterKind.SOBEL

    def marginal(self, img: ColorImage) -> ScalarImage:
        """Per-channel sqrt(Fh^2 + Fv^2), then the Euclidean norm across channels."""
        fh = _per_channel(img.pixels, SOBEL_H)
        fv = _per_channel(img.pixels, SOBEL_V)
        channel_magnitude = np.sqrt(fh ** 2 + fv ** 2)
        return ScalarImage(pixel_norm(channel_magnitude))

    def vector(self, img: ColorImage) -> ScalarImage:
        """Sum of squared opposite-sample differences; the 2 weights the squared term."""
        p = pad_replicate(img, 1).pixels
        a, b, c = p[:-2, :-2], p[:-2, 1:-1], p[:-2, 2:]
        d, f = p[1:-1, :-2], p[1:-1, 2:]
        g, h, i = p[2:, :-2], p[2:, 1:-1], p[2:, 2:]
        terms = ((c - a) ** 2 + 2 * (f - d) ** 2 + (i - g) ** 2
                 + (g - a) ** 2 + 2 * (h - b) ** 2 + (i - c) ** 2)
        return ScalarImage(np.sqrt(np.sum(terms, axis=-1)))


class MorphGradientFilter(EdgeFilter):
    kind = FilterKind.MORPH_GRADIENT

    def marginal(self, img: ColorImage) -> ScalarImage:
        return self._gradient(img, Approach.MARGINAL)

    def vector(self, img: ColorImage) -> ScalarImage:
        return self._gradient(img, Approach.VECTOR)

    @staticmethod
    def _gradient(img: ColorImage, approach: Approach) -> ScalarImage:
        if approach is Approach.VECTOR:
            # dilation and erosion share one norm map
            padded, norms = window_norms(img)
            diff = (select_by_norm(padded, np.argmax(norms, axis=-1))
                    - select_by_norm(padded, np.argmin(norms, axis=-1)))
        else:
            diff = dilate(img, approach).pixels - erode(img, approach).pixels
        return ScalarImage(pixel_norm(diff))


def laplacian(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ScalarImage:
    return LaplacianFilter().apply(img, approach)


def sobel(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ScalarImage:
    return SobelFilter().apply(img, approach)


def morph_gradient(img: ColorImage, approach: Union[Approach, str] = Approach.MARGINAL) -> ScalarImage:
    return MorphGradientFilter().apply(img, approach)


def sobel_vector_dominance(img: ColorImage, tolerance: float = 1e-9) -> float:
    """Fraction of pixels where the vector Sobel response is at least the marginal one.

    The ordering is reported rather than assumed: aligned per-channel differences
    make the marginal form larger.
    """
    vec = sobel(img, Approach.VECTOR).values
    mar = sobel(img, Approach.MARGINAL).values
    fraction = float(np.mean(vec >= mar - tolerance))
    logger.debug(f"Vector Sobel >= marginal Sobel on {fraction:.1%} of pixels")
    return fraction
