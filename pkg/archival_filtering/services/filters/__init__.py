# archival_filtering/services/filters/__init__.py
# Goals: Register every filter stack and expose the filter operations.

from .base import WINDOW_LABELS, DenoiseFilter, EdgeFilter, FilterStack, extract_windows, window_at
from .denoise import MeanFilter, MedianFilter, mean_filter, median_filter
from .morphology import MorphDenoiseFilter, closing, dilate, erode, morph_denoise, opening
from .edges import (
    LaplacianFilter,
    MorphGradientFilter,
    SobelFilter,
    laplacian,
    morph_gradient,
    sobel,
    sobel_vector_dominance,
)
from .pipeline import apply_denoise, apply_edge, apply_filter
