# archival_filtering/services/metrics/quality.py
# Goals: Denoising criteria: MSE, PSNR and the regional statistics ratio SR.

import logging
import math

import numpy as np

from archival_filtering.services.imaging import INTENSITY_MAX, ColorImage, pixel_norm

logger = logging.getLogger(__name__)

PSNR_INF = math.inf
SR_TILE = 5


def _check_pair(reference: ColorImage, filtered: ColorImage) -> None:
    if reference.pixels.shape != filtered.pixels.shape:
        raise ValueError(f"image dimensions differ: {reference.width}x{reference.height} "
                         f"vs {filtered.width}x{filtered.height}")
    if reference.space is not filtered.space:
        raise ValueError(f"color spaces differ: {reference.space.value} vs {filtered.space.value}")


def mse(reference: ColorImage, filtered: ColorImage) -> float:
    """Mean over pixels of the squared Euclidean distance between pixel vectors."""
    _check_pair(reference, filtered)
    diff = reference.pixels - filtered.pixels
    return float(np.mean(np.sum(diff * diff, axis=-1)))


def psnr(reference: ColorImage, filtered: ColorImage, peak: float = INTENSITY_MAX) -> float:
    """10 log10(peak^2 / MSE) in dB; +inf when the images are identical."""
    error = mse(reference, filtered)
    if error == 0:
        return PSNR_INF
    return 10.0 * math.log10(peak * peak / error)


def sr(reference: ColorImage, filtered: ColorImage, tile: int = SR_TILE) -> float:
    """Sum of per-tile population std of the residual norm, over (mean reference norm x N).

    Tiles are non-overlapping tile x tile blocks; partial tiles at the right and
    bottom edges count as regions of their own. Reductions use numpy's pairwise sum.
    """
    _check_pair(reference, filtered)
    if tile < 1:
        raise ValueError(f"tile must be >= 1, got {tile}")

    m = float(np.mean(reference.norms()))
    if m == 0:
        raise ValueError("SR is undefined for an all-black reference (mean intensity 0)")

    residual = pixel_norm(reference.pixels - filtered.pixels)
    h, w = residual.shape
    rows, cols = -(-h // tile), -(-w // tile)

    padded = np.full((rows * tile, cols * tile), np.nan)
    padded[:h, :w] = residual
    blocks = padded.reshape(rows, tile, cols, tile)
    sigmas = np.nanstd(blocks, axis=(1, 3))

    return float(np.sum(sigmas) / (m * reference.size))
