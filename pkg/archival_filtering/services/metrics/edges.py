# archival_filtering/services/metrics/edges.py
# Goals: Edge-detection criterion R_SC with four-direction scans and optional Lee smoothing.

from typing import Dict, Optional
import logging

import numpy as np
from scipy import ndimage

from archival_filtering.models import Direction, LeeParams
from archival_filtering.services.imaging import ScalarImage

logger = logging.getLogger(__name__)

SEGMENT_LENGTH = 3
EPSILON = 1e-6
R_MAX = 1e6
LEE_WINDOW = 5


def lee_filter(img: ScalarImage, window: int = LEE_WINDOW,
               noise_variance: Optional[float] = None) -> ScalarImage:
    """Local-statistics smoothing out = m + k (in - m), k = v / (v + noise_variance).

    `noise_variance` defaults to the sample variance of the whole map.
    """
    if window < 1 or window % 2 == 0:
        raise ValueError(f"window must be a positive odd size, got {window}")
    x = img.values
    if noise_variance is None:
        noise_variance = float(np.var(x))
    if noise_variance < 0:
        raise ValueError(f"noise_variance must be >= 0, got {noise_variance}")

    local_mean = ndimage.uniform_filter(x, size=window, mode="nearest")
    local_sq_mean = ndimage.uniform_filter(x * x, size=window, mode="nearest")
    local_var = np.maximum(local_sq_mean - local_mean ** 2, 0.0)

    denom = local_var + noise_variance
    # flat window with zero noise: nothing to correct, keep the input
    k = np.divide(local_var, denom, out=np.ones_like(local_var), where=denom > 0)
    out = local_mean + k * (x - local_mean)
    return ScalarImage(np.maximum(out, 0.0))


def _ratio(m1, m2, v1, v2, epsilon: float, cap: float):
    return np.minimum(np.abs(m1 - m2) / np.sqrt(v1 + v2 + epsilon), cap)


def directional_ratio(img: ScalarImage, x: int, y: int, direction: Direction,
                      length: int = SEGMENT_LENGTH, epsilon: float = EPSILON,
                      cap: float = R_MAX) -> float:
    """Contrast between the two `length`-sample sides of pixel (x=column, y=row) along `direction`.

    Samples falling outside the map take the nearest edge value.
    """
    if length < 2:
        raise ValueError(f"segment length must be >= 2, got {length}")
    direction = Direction(direction)
    dy, dx = direction.step
    h, w = img.values.shape

    def side(sign: int) -> np.ndarray:
        rows = [min(max(y + sign * k * dy, 0), h - 1) for k in range(1, length + 1)]
        cols = [min(max(x + sign * k * dx, 0), w - 1) for k in range(1, length + 1)]
        return img.values[rows, cols]

    z1, z2 = side(+1), side(-1)
    return float(_ratio(np.mean(z1), np.mean(z2), np.var(z1), np.var(z2), epsilon, cap))


def directional_ratio_maps(img: ScalarImage, length: int = SEGMENT_LENGTH,
                           epsilon: float = EPSILON, cap: float = R_MAX) -> Dict[Direction, np.ndarray]:
    """r_z for every pixel and every direction, vectorised over the map."""
    if length < 2:
        raise ValueError(f"segment length must be >= 2, got {length}")
    h, w = img.values.shape
    padded = np.pad(img.values, length, mode="edge")

    def shifted(oy: int, ox: int) -> np.ndarray:
        return padded[length + oy:length + oy + h, length + ox:length + ox + w]

    maps = {}
    for direction in Direction:
        dy, dx = direction.step
        z1 = np.stack([shifted(k * dy, k * dx) for k in range(1, length + 1)])
        z2 = np.stack([shifted(-k * dy, -k * dx) for k in range(1, length + 1)])
        maps[direction] = _ratio(z1.mean(axis=0), z2.mean(axis=0),
                                 z1.var(axis=0), z2.var(axis=0), epsilon, cap)
    return maps


def rsc(edge_map: ScalarImage, length: int = SEGMENT_LENGTH, lee: Optional[LeeParams] = None,
        epsilon: float = EPSILON, cap: float = R_MAX) -> float:
    """Mean over pixels of sqrt(sum_z r_z^2) across the four scan directions."""
    if lee is not None:
        edge_map = lee_filter(edge_map, lee.window, lee.noise_variance)
    maps = directional_ratio_maps(edge_map, length, epsilon, cap)
    combined = np.sqrt(sum(r * r for r in maps.values()))
    return float(np.sum(combined) / edge_map.size)
