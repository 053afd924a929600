from .image import (
    INTENSITY_MAX,
    ColorImage,
    ColorSpaceError,
    ScalarImage,
    UnsupportedImageError,
    pad_replicate,
    pixel_norm,
)
from .color import hsb_to_rgb, rgb_to_hsb, to_space
from .io import load_image, save_image, save_scalar_image
