import numpy as np
import pytest

from ..core.config import FilteringConfig
from ..models import ColorSpace, ExperimentConfig
from ..services.imaging import ColorImage, save_image


@pytest.fixture
def config():
    """Thread executor so monkeypatched module functions reach the workers."""
    return FilteringConfig(executor="thread")


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240501))


@pytest.fixture
def random_image(rng):
    """Factory for random RGB images with integer-valued components."""

    def make(width: int = 16, height: int = 16) -> ColorImage:
        return ColorImage(rng.integers(0, 256, size=(height, width, 3)).astype(np.float64), ColorSpace.RGB)

    return make


@pytest.fixture
def step_image():
    """Left half black, right half white, 8x8."""
    pixels = np.zeros((8, 8, 3))
    pixels[:, 4:] = 255.0
    return ColorImage(pixels)


@pytest.fixture
def png_file(tmp_path, random_image):
    path = tmp_path / "page.png"
    save_image(random_image(24, 20), path)
    return path


@pytest.fixture
def small_experiment():
    """Factory for a small synthetic experiment; keyword arguments override fields."""

    def make(**overrides) -> ExperimentConfig:
        data = {
            "images": [{"synthetic": {"kind": "document", "width": 64, "height": 64, "seed": 7}}],
            "spaces": ["rgb"],
            "denoise_filters": ["median"],
            "denoise_approaches": ["marginal"],
            "noises": ["clean"],
            "seeds": [0],
            "record_timing": False,
            "max_workers": 2,
        }
        data.update(overrides)
        return ExperimentConfig.model_validate(data)

    return make
