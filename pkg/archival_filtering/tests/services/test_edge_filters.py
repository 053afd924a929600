import math

import numpy as np
import pytest
from pydantic import ValidationError

from ...core.metaclasses import FilterStackMeta
from ...models import Approach, FilterKind, FilterSpec
from ...services.filters import (
    LaplacianFilter,
    apply_edge,
    apply_filter,
    laplacian,
    morph_gradient,
    sobel,
    sobel_vector_dominance,
)
from ...services.imaging import ColorImage, ScalarImage

EDGE_OPS = [laplacian, sobel, morph_gradient]
SINGLE = ["marginal", "vector"]


@pytest.mark.parametrize("op", EDGE_OPS)
@pytest.mark.parametrize("approach", SINGLE)
def test_constant_image_gives_zero_map(op, approach):
    out = op(ColorImage.filled(7, 5, (90.0, 20.0, 200.0)), approach)
    assert isinstance(out, ScalarImage)
    assert out.values.shape == (5, 7)
    assert np.all(out.values == 0.0)


def test_laplacian_examples():
    pixels = np.full((3, 3, 3), 20.0)
    pixels[1, 1] = 10.0
    img = ColorImage(pixels)

    assert laplacian(img, "vector").values[1, 1] == pytest.approx(math.sqrt(1200), abs=1e-9)
    assert laplacian(img, "marginal").values[1, 1] == pytest.approx(40 * math.sqrt(3), abs=1e-9)


def vertical_step(level: float) -> ColorImage:
    pixels = np.zeros((5, 4, 3))
    pixels[:, 2:] = level
    return ColorImage(pixels)


@pytest.mark.parametrize("col", [1, 2])
def test_sobel_on_vertical_step(col):
    img = vertical_step(90.0)
    # window columns (0, 0, 90) or (0, 90, 90): every opposite pair differs by 90 horizontally
    expected_vector = math.sqrt(3 * (90 ** 2 + 2 * 90 ** 2 + 90 ** 2))
    expected_marginal = math.sqrt(3) * (90 + 2 * 90 + 90)

    assert sobel(img, "vector").values[2, col] == pytest.approx(expected_vector, abs=1e-9)
    assert sobel(img, "marginal").values[2, col] == pytest.approx(expected_marginal, abs=1e-9)
    assert sobel(img, "vector").values[2, 0] == 0.0


def test_sobel_dominance_is_a_fraction(random_image):
    assert sobel_vector_dominance(ColorImage.filled(4, 4, 50.0)) == 1.0
    # aligned per-channel differences favour the marginal form
    assert sobel_vector_dominance(vertical_step(90.0)) < 1.0
    assert 0.0 <= sobel_vector_dominance(random_image(32, 32)) <= 1.0


@pytest.mark.parametrize("approach", SINGLE)
def test_morph_gradient_on_binary_step(step_image, approach):
    values = morph_gradient(step_image, approach).values
    band = math.sqrt(3) * 255
    np.testing.assert_allclose(values[:, 3:5], band)
    assert np.all(values[:, :3] == 0.0)
    assert np.all(values[:, 5:] == 0.0)


@pytest.mark.parametrize("op", EDGE_OPS)
@pytest.mark.parametrize("approach", SINGLE)
def test_edge_maps_are_non_negative_and_unclamped(random_image, op, approach):
    values = op(random_image(16, 16), approach).values
    assert values.min() >= 0.0
    assert values.max() > 255.0


def test_edge_filters_reject_dual_approaches(random_image):
    with pytest.raises(ValueError):
        LaplacianFilter().apply(random_image(4, 4), "mv")
    with pytest.raises(ValidationError):
        FilterSpec(kind="sobel", approach="vm")


def test_apply_edge_rejects_denoise_kinds(random_image):
    with pytest.raises(ValueError):
        apply_edge(random_image(4, 4), FilterSpec(kind="median"))


def test_registry_dispatch(random_image):
    img = random_image(8, 8)
    registered = FilterStackMeta.get_registered_filters()
    assert set(registered) >= {k.value for k in FilterKind}

    out = apply_filter(img, FilterSpec(kind=FilterKind.SOBEL, approach=Approach.VECTOR))
    np.testing.assert_array_equal(out.values, sobel(img, "vector").values)
    out = apply_filter(img, {"kind": "median", "approach": "vm"})
    assert isinstance(out, ColorImage)
