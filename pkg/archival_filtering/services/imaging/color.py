# archival_filtering/services/imaging/color.py
# Goals: RGB <-> HSB conversion with every HSB channel rescaled to [0, 255].

import logging

import numpy as np

from archival_filtering.models import ColorSpace
from .image import INTENSITY_MAX, ColorImage

logger = logging.getLogger(__name__)

RANGE_TOLERANCE = 1e-6


def _checked_components(img: ColorImage) -> np.ndarray:
    px = img.pixels
    lo, hi = float(px.min()), float(px.max())
    if lo < -RANGE_TOLERANCE or hi > INTENSITY_MAX + RANGE_TOLERANCE:
        raise ValueError(f"components must lie in [0, 255], found range [{lo:.6g}, {hi:.6g}]")
    return np.clip(px, 0.0, INTENSITY_MAX)


def rgb_to_hsb(img: ColorImage) -> ColorImage:
    """Convert to HSB. Hue maps [0, 360) degrees onto [0, 255); hue is 0 for grays."""
    img.require_space(ColorSpace.RGB)
    px = _checked_components(img)
    r, g, b = px[..., 0], px[..., 1], px[..., 2]

    maxc = px.max(axis=-1)
    minc = px.min(axis=-1)
    delta = maxc - minc
    chromatic = delta > 0
    safe_delta = np.where(chromatic, delta, 1.0)

    sector = np.select(
        [maxc == r, maxc == g],
        [np.mod((g - b) / safe_delta, 6.0), (b - r) / safe_delta + 2.0],
        default=(r - g) / safe_delta + 4.0,
    )
    hue_deg = np.where(chromatic, 60.0 * sector, 0.0)
    saturation = np.where(maxc > 0, delta / np.where(maxc > 0, maxc, 1.0), 0.0)

    hsb = np.stack([
        hue_deg / 360.0 * INTENSITY_MAX,
        saturation * INTENSITY_MAX,
        maxc,
    ], axis=-1)
    return ColorImage(hsb, ColorSpace.HSB)


def hsb_to_rgb(img: ColorImage) -> ColorImage:
    """Inverse of rgb_to_hsb."""
    img.require_space(ColorSpace.HSB)
    px = _checked_components(img)
    h = px[..., 0] * 6.0 / INTENSITY_MAX
    s = px[..., 1] / INTENSITY_MAX
    v = px[..., 2]

    chroma = v * s
    x = chroma * (1.0 - np.abs(np.mod(h, 2.0) - 1.0))
    zero = np.zeros_like(chroma)
    sector = np.mod(np.floor(h), 6.0)

    conditions = [sector == k for k in range(6)]
    r1 = np.select(conditions, [chroma, x, zero, zero, x, chroma])
    g1 = np.select(conditions, [x, chroma, chroma, x, zero, zero])
    b1 = np.select(conditions, [zero, zero, x, chroma, chroma, x])

    m = v - chroma
    rgb = np.stack([r1 + m, g1 + m, b1 + m], axis=-1)
    return ColorImage(np.clip(rgb, 0.0, INTENSITY_MAX), ColorSpace.RGB)


def to_space(img: ColorImage, space: ColorSpace) -> ColorImage:
    """Convert between RGB and HSB; no-op when already in `space`."""
    space = ColorSpace(space)
    if img.space is space:
        return img
    return rgb_to_hsb(img) if space is ColorSpace.HSB else hsb_to_rgb(img)
