from .quality import PSNR_INF, SR_TILE, mse, psnr, sr
from .edges import EPSILON, R_MAX, SEGMENT_LENGTH, directional_ratio, directional_ratio_maps, lee_filter, rsc
