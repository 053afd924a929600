# archival_filtering/services/noise/generator.py
# Goals: Seeded degradations (gaussian, speckle, salt & pepper).

import logging

import numpy as np

from archival_filtering.models import ColorSpace, NoiseKind, NoiseSpec
from archival_filtering.services.imaging import INTENSITY_MAX, ColorImage
from .registry import NoiseRegistry

logger = logging.getLogger(__name__)

RNG_ALGORITHM = "PCG64"


def make_rng(seed: int) -> np.random.Generator:
    """A fresh generator owned by one call; never shared."""
    return np.random.Generator(np.random.PCG64(seed))


def _clamp(values: np.ndarray) -> np.ndarray:
    return np.clip(values, 0.0, INTENSITY_MAX)


@NoiseRegistry.register(NoiseKind.GAUSSIAN)
def add_gaussian(img: ColorImage, sigma: float, seed: int = 0) -> ColorImage:
    """Independent N(0, sigma^2) deviate on every component, clamped to [0, 255]."""
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    rng = make_rng(seed)
    noise = rng.normal(0.0, sigma, size=img.pixels.shape)
    return img.with_pixels(_clamp(img.pixels + noise))


@NoiseRegistry.register(NoiseKind.SPECKLE)
def add_speckle(img: ColorImage, variance: float, seed: int = 0) -> ColorImage:
    """Multiplicative noise out = in + in * n, n ~ N(0, variance), per component."""
    if not 0 < variance < 1:
        raise ValueError(f"variance must lie in (0, 1), got {variance}")
    rng = make_rng(seed)
    n = rng.normal(0.0, np.sqrt(variance), size=img.pixels.shape)
    return img.with_pixels(_clamp(img.pixels + img.pixels * n))


@NoiseRegistry.register(NoiseKind.SALT_PEPPER)
def add_salt_pepper(img: ColorImage, density: float, seed: int = 0) -> ColorImage:
    """Replace round(density * N) whole pixels by black or white, chosen without replacement."""
    if not 0 < density < 1:
        raise ValueError(f"density must lie in (0, 1), got {density}")
    rng = make_rng(seed)
    n_pixels = img.size
    count = int(np.floor(density * n_pixels + 0.5))

    out = img.pixels.reshape(-1, 3).copy()
    if count:
        positions = rng.choice(n_pixels, size=count, replace=False)
        white = rng.random(count) >= 0.5
        out[positions] = np.where(white[:, None], INTENSITY_MAX, 0.0)
    return img.with_pixels(out.reshape(img.pixels.shape))


def apply_noise(img: ColorImage, spec: NoiseSpec) -> ColorImage:
    """Corrupt an RGB image with the model described by `spec`."""
    if not isinstance(spec, NoiseSpec):
        spec = NoiseSpec.model_validate(spec)
    img.require_space(ColorSpace.RGB)
    model = NoiseRegistry.get_model(spec.kind)
    logger.debug(f"Applying {spec.noise_id} ({spec.kind.value}, parameter={spec.parameter}, seed={spec.seed})")
    return model(img, spec.parameter, spec.seed)
