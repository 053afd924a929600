import time
from pathlib import Path

import pytest

from ...core.config import FilteringConfig
from ...models import ExperimentConfig, FilterKind
from ...services.bench import BenchEngine, findings, matrix_size, summarize

BUNDLED = Path(__file__).resolve().parents[2] / "config"


@pytest.fixture(scope="module")
def default_run():
    """The bundled denoising matrix, run once for the module, with its wall time."""
    experiment = ExperimentConfig.from_file(BUNDLED / "bench_default.json")
    start = time.perf_counter()
    results = BenchEngine(FilteringConfig()).run(experiment)
    return experiment, results, time.perf_counter() - start


@pytest.mark.slow
@pytest.mark.integration
def test_default_matrix_completes_within_a_minute(default_run):
    experiment, results, seconds = default_run
    assert len(results) == matrix_size(experiment)
    assert all(r.error is None for r in results)
    assert seconds < 60


@pytest.mark.slow
@pytest.mark.integration
def test_marginal_approach_wins_rgb_denoising(default_run):
    result = findings(summarize(default_run[1]))
    for metric in ("psnr", "sr"):
        assert result.marginal_win_fraction[metric] >= 0.75
        assert result.dual_win_fraction[metric] <= 0.25


@pytest.mark.slow
@pytest.mark.integration
def test_rgb_and_hsb_winners_mostly_agree(default_run):
    assert findings(summarize(default_run[1])).space_agreement >= 0.6


@pytest.mark.integration
def test_edge_matrix_favours_vector_gradients():
    experiment = ExperimentConfig.from_file(BUNDLED / "bench_edges.yml")
    assert experiment.lee is not None

    results = BenchEngine(FilteringConfig()).run(experiment)
    assert all(r.error is None for r in results)
    ratios = findings(summarize(results)).rsc_vector_ratio

    assert ratios[FilterKind.LAPLACIAN] > 1
    assert ratios[FilterKind.SOBEL] > 1
    # morphological gradient: marginal and vector within 15% of each other
    morph = ratios[FilterKind.MORPH_GRADIENT]
    assert abs(morph - 1) / max(morph, 1) <= 0.15
