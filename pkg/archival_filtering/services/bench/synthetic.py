# archival_filtering/services/bench/synthetic.py
# Goals: Deterministic parchment-like document pages standing in for scanned archives.

from typing import Tuple
import logging
import math

import numpy as np
from PIL import Image, ImageDraw

from archival_filtering.models import ColorSpace, SyntheticSource
from archival_filtering.services.imaging import INTENSITY_MAX, ColorImage
from archival_filtering.services.noise import add_gaussian, make_rng

logger = logging.getLogger(__name__)

MIN_SIDE = 64
PAPER_BASE = np.array([232.0, 216.0, 180.0])
INK_BASE = np.array([48.0, 36.0, 30.0])
INK_COVERAGE = 0.12
GRAIN_SIGMA = 3.0


def _check_size(width: int, height: int) -> None:
    if width < MIN_SIDE or height < MIN_SIDE:
        raise ValueError(f"synthetic pages need width, height >= {MIN_SIDE}, got {width}x{height}")


def _low_frequency(rng: np.random.Generator, width: int, height: int, cells: int = 6) -> np.ndarray:
    """Smooth field in [-1, 1]: coarse uniform noise upscaled bilinearly."""
    coarse = rng.uniform(-1.0, 1.0, (cells, cells)).astype(np.float32)
    up = Image.fromarray(coarse).resize((width, height), Image.BILINEAR)
    return np.asarray(up, dtype=np.float64)


def _paper(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    """Beige base + linear gradient + blotchy low-frequency tone + fine grain."""
    yy, xx = np.mgrid[0:height, 0:width]
    angle = rng.uniform(0.0, 2.0 * math.pi)
    ramp = (np.cos(angle) * (xx / width - 0.5) + np.sin(angle) * (yy / height - 0.5)) * 24.0
    blotch = _low_frequency(rng, width, height) * 8.0
    grain = rng.normal(0.0, GRAIN_SIGMA, (height, width))
    tone = ramp + blotch + grain
    return PAPER_BASE[None, None, :] + tone[..., None]


def _ink_mask(rng: np.random.Generator, width: int, height: int) -> np.ndarray:
    """Random line and arc strokes drawn at roughly INK_COVERAGE of the page."""
    stroke = max(1, round(min(width, height) / 170))
    mean_area = 12.0 * stroke * stroke
    count = math.ceil(INK_COVERAGE * width * height / mean_area)

    canvas = Image.new("L", (width, height), 0)
    draw = ImageDraw.Draw(canvas)
    for _ in range(count):
        x0, y0 = rng.uniform(0, width), rng.uniform(0, height)
        if rng.random() < 0.7:
            length = rng.uniform(6 * stroke, 18 * stroke)
            theta = rng.uniform(0.0, 2.0 * math.pi)
            x1, y1 = x0 + length * math.cos(theta), y0 + length * math.sin(theta)
            draw.line([(x0, y0), (x1, y1)], fill=255, width=stroke)
        else:
            radius = rng.uniform(3 * stroke, 8 * stroke)
            start = rng.uniform(0.0, 360.0)
            span = rng.uniform(60.0, 180.0)
            box = [x0 - radius, y0 - radius, x0 + radius, y0 + radius]
            draw.arc(box, start=start, end=start + span, fill=255, width=stroke)
    return np.asarray(canvas) > 0


def render_document(width: int, height: int, seed: int) -> Tuple[ColorImage, np.ndarray]:
    """A synthetic page and the boolean mask of its ink strokes."""
    _check_size(width, height)
    rng = make_rng(seed)
    page = _paper(rng, width, height)
    mask = _ink_mask(rng, width, height)

    ink = INK_BASE + rng.normal(0.0, 6.0, 3)
    ink_layer = ink[None, None, :] + rng.normal(0.0, GRAIN_SIGMA, (height, width))[..., None]
    page = np.where(mask[..., None], ink_layer, page)
    image = ColorImage(np.clip(page, 0.0, INTENSITY_MAX), ColorSpace.RGB)
    logger.debug(f"Synthetic page {width}x{height} seed={seed}: {mask.mean():.1%} ink")
    return image, mask


def generate_synthetic_document(width: int, height: int, seed: int) -> ColorImage:
    return render_document(width, height, seed)[0]


def generate_step_image(width: int, height: int, seed: int, noise_sigma: float = 10.0) -> ColorImage:
    """Paper/ink vertical step with a horizontal ink stroke, corrupted by gaussian noise."""
    _check_size(width, height)
    pixels = np.empty((height, width, 3))
    pixels[...] = PAPER_BASE
    pixels[:, : width // 2] = INK_BASE + 40.0
    band = max(2, height // 32)
    row = height // 3
    pixels[row:row + band, width // 2:] = INK_BASE
    clean = ColorImage(pixels, ColorSpace.RGB)
    return add_gaussian(clean, noise_sigma, seed) if noise_sigma > 0 else clean


def synthesize(source: SyntheticSource) -> ColorImage:
    if source.kind == "step":
        return generate_step_image(source.width, source.height, source.seed)
    return generate_synthetic_document(source.width, source.height, source.seed)
