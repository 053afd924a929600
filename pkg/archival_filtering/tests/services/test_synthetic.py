import numpy as np
import pytest

from ...models import ColorSpace, SyntheticSource
from ...services.bench import generate_step_image, generate_synthetic_document, render_document, synthesize


def test_same_seed_gives_identical_pages():
    first = generate_synthetic_document(128, 96, 3)
    second = generate_synthetic_document(128, 96, 3)
    np.testing.assert_array_equal(first.pixels, second.pixels)
    assert not np.array_equal(first.pixels, generate_synthetic_document(128, 96, 4).pixels)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_default_page_statistics(seed):
    page, mask = render_document(512, 512, seed)
    assert page.space is ColorSpace.RGB
    assert (page.width, page.height) == (512, 512)
    assert page.pixels.min() >= 0.0 and page.pixels.max() <= 255.0

    norms = page.norms()
    assert norms[mask].mean() < norms[~mask].mean()
    assert 0.05 <= mask.mean() <= 0.40


def test_pages_need_a_minimum_size():
    with pytest.raises(ValueError):
        generate_synthetic_document(63, 128, 0)
    with pytest.raises(ValueError):
        generate_step_image(128, 10, 0)


def test_step_image():
    clean = generate_step_image(64, 64, 0, noise_sigma=0)
    left, right = clean.pixels[:, :32], clean.pixels[40:, 32:]
    assert np.linalg.norm(left, axis=-1).max() < np.linalg.norm(right, axis=-1).min()

    noisy = generate_step_image(64, 64, 5)
    np.testing.assert_array_equal(noisy.pixels, generate_step_image(64, 64, 5).pixels)
    assert not np.array_equal(noisy.pixels, clean.pixels)


def test_synthesize_dispatches_on_kind():
    document = synthesize(SyntheticSource(kind="document", width=64, height=64, seed=9))
    np.testing.assert_array_equal(document.pixels, generate_synthetic_document(64, 64, 9).pixels)

    step = synthesize(SyntheticSource(kind="step", width=64, height=80, seed=9))
    np.testing.assert_array_equal(step.pixels, generate_step_image(64, 80, 9).pixels)
