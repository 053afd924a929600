import math

import numpy as np
import pytest

from ...core.config import FilteringConfig
from ...models import Approach, BenchResult, ColorSpace, FilterKind, FilterSpec
from ...services.bench import (
    BenchEngine,
    derive_seed,
    emit_csv,
    engine as engine_module,
    matrix_size,
    run_matrix,
)
from ...services.filters import apply_denoise
from ...services.imaging import save_image, to_space
from ...services.metrics import psnr, sr


@pytest.fixture
def engine(config):
    return BenchEngine(config)


def two_images():
    return [
        {"synthetic": {"kind": "document", "width": 64, "height": 64, "seed": 1}},
        {"synthetic": {"kind": "document", "width": 64, "height": 64, "seed": 2}},
    ]


@pytest.mark.asyncio
async def test_single_cell(engine, small_experiment):
    results = await engine.run_matrix(small_experiment())

    assert len(results) == 1
    row = results[0]
    assert (row.space, row.filter, row.approach, row.noise, row.seed) == (
        ColorSpace.RGB, FilterKind.MEDIAN, Approach.MARGINAL, "clean", 0)
    assert row.error is None
    assert row.ms is None
    assert row.metrics.psnr > 0 and math.isfinite(row.metrics.psnr)
    assert row.metrics.sr >= 0
    assert row.metrics.rsc is None


@pytest.mark.asyncio
async def test_matrix_cardinality(engine, small_experiment):
    experiment = small_experiment(
        images=two_images(),
        spaces=["rgb", "hsb"],
        denoise_filters=["median", "morph_denoise"],
        denoise_approaches=["marginal", "vector", "mv", "vm"],
        noises=["noise1", "noise2", "noise3", "noise4", "noise5", "noise6"],
        max_workers=4,
    )
    results = await engine.run_matrix(experiment)

    assert len(results) == 192 == matrix_size(experiment)
    assert all(r.error is None for r in results)
    assert results == sorted(results, key=BenchResult.sort_key)
    assert len({(r.image, r.space, r.filter, r.approach, r.noise, r.seed) for r in results}) == 192


@pytest.mark.asyncio
async def test_edge_rows_score_rsc(engine, small_experiment):
    experiment = small_experiment(denoise_filters=[], edge_filters=["laplacian", "sobel", "morph_gradient"],
                                  noises=["clean", "noise2"])
    results = await engine.run_matrix(experiment)

    assert len(results) == 12
    for row in results:
        assert row.metrics.psnr is None and row.metrics.sr is None
        assert row.metrics.rsc > 0


@pytest.mark.asyncio
async def test_lee_smoothing_changes_rsc(engine, small_experiment):
    plain = small_experiment(denoise_filters=[], edge_filters=["sobel"], edge_approaches=["vector"])
    smoothed = small_experiment(denoise_filters=[], edge_filters=["sobel"], edge_approaches=["vector"],
                                lee={"window": 5})

    first = (await engine.run_matrix(plain))[0].metrics.rsc
    second = (await engine.run_matrix(smoothed))[0].metrics.rsc
    from_config = (await BenchEngine(FilteringConfig(lee_enabled=True)).run_matrix(plain))[0].metrics.rsc
    assert first != pytest.approx(second)
    assert from_config == second


@pytest.mark.asyncio
async def test_noise_applied_once_before_conversion(engine, small_experiment, monkeypatch):
    corrupted = []
    original = engine_module.apply_noise

    def recording_apply_noise(img, spec):
        out = original(img, spec)
        corrupted.append((spec.seed, out))
        return out

    monkeypatch.setattr(engine_module, "apply_noise", recording_apply_noise)
    experiment = small_experiment(spaces=["rgb", "hsb"], noises=["clean", "noise1", "noise5"], seeds=[0, 1])
    results = await engine.run_matrix(experiment)

    # one corruption per (image, noise, seed), shared by both spaces
    assert len(corrupted) == 4
    assert len(results) == 12

    image_id = results[0].image
    seed_to_image = dict(corrupted)
    clean = engine._load(experiment.images[0])
    spec = FilterSpec(kind="median", approach="marginal")
    for row in (r for r in results if r.noise == "noise1"):
        noisy = seed_to_image[derive_seed(row.seed, image_id, "noise1")]
        reference = to_space(clean, row.space)
        filtered = apply_denoise(to_space(noisy, row.space), spec)
        assert row.metrics.psnr == psnr(reference, filtered)
        assert row.metrics.sr == sr(reference, filtered)


@pytest.mark.asyncio
async def test_cell_failures_are_recorded(engine, small_experiment, monkeypatch):
    original = engine_module.apply_denoise

    def flaky(img, spec):
        if spec.approach is Approach.VECTOR:
            raise RuntimeError("boom")
        return original(img, spec)

    monkeypatch.setattr(engine_module, "apply_denoise", flaky)
    experiment = small_experiment(denoise_approaches=["marginal", "vector"], noises=["clean", "noise1"])
    results = await engine.run_matrix(experiment)

    assert len(results) == 4
    failed = [r for r in results if r.error]
    assert len(failed) == 2
    assert all(r.approach is Approach.VECTOR and r.error == "RuntimeError: boom" for r in failed)
    assert all(r.metrics.psnr is None for r in failed)


@pytest.mark.asyncio
async def test_unreadable_image_fills_rows_with_errors(engine, small_experiment, tmp_path):
    bad = tmp_path / "scan.png"
    bad.write_text("not a png")
    experiment = small_experiment(images=[{"path": str(bad)}], spaces=["rgb", "hsb"])
    results = await engine.run_matrix(experiment)

    assert len(results) == 2
    assert all(r.error.startswith("UnsupportedImageError") for r in results)


@pytest.mark.asyncio
async def test_missing_image_path_aborts(engine, small_experiment, tmp_path):
    experiment = small_experiment(images=[{"path": str(tmp_path / "missing.png")}])
    with pytest.raises(FileNotFoundError):
        await engine.run_matrix(experiment)


@pytest.mark.asyncio
async def test_file_images_and_timing(engine, small_experiment, tmp_path, random_image):
    path = tmp_path / "scan.png"
    save_image(random_image(32, 32), path)
    experiment = small_experiment(images=[{"path": str(path)}], record_timing=True)
    results = await engine.run_matrix(experiment)

    assert results[0].image == "scan"
    assert results[0].ms is not None and results[0].ms >= 0


def test_derive_seed_is_stable_and_distinct():
    assert derive_seed(0, "page", "noise1") == derive_seed(0, "page", "noise1")
    seeds = {derive_seed(s, i, n) for s in (0, 1) for i in ("a", "b") for n in ("noise1", "noise2")}
    assert len(seeds) == 8
    assert all(0 <= s < 2 ** 64 for s in seeds)


def test_reruns_produce_identical_csv(small_experiment, tmp_path):
    experiment = small_experiment(
        images=two_images(),
        spaces=["rgb", "hsb"],
        denoise_approaches=["marginal", "vm"],
        edge_filters=["sobel"],
        noises=["clean", "noise2", "noise4", "noise6"],
        seeds=[0, 1],
    )
    config = FilteringConfig(max_workers=3)
    emit_csv(run_matrix(experiment, config), tmp_path / "first.csv")
    emit_csv(run_matrix(experiment, config), tmp_path / "second.csv")

    assert (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()


def test_engine_run_is_blocking(small_experiment):
    results = BenchEngine().run(small_experiment())
    assert isinstance(results, list) and len(results) == 1
    assert np.isfinite(results[0].metrics.psnr)


@pytest.mark.asyncio
async def test_dual_cells_reuse_single_passes(engine, small_experiment, monkeypatch):
    calls = []
    original = engine_module.apply_denoise

    def counting(img, spec):
        calls.append(spec.approach)
        return original(img, spec)

    monkeypatch.setattr(engine_module, "apply_denoise", counting)
    experiment = small_experiment(denoise_approaches=["marginal", "vector", "mv", "vm"], noises=["noise3"])
    results = await engine.run_matrix(experiment)

    # M, V, then V on the M result and M on the V result
    assert sorted(calls, key=lambda a: a.rank) == [Approach.MARGINAL] * 2 + [Approach.VECTOR] * 2

    clean = engine._load(experiment.images[0])
    noise = experiment.noise_spec("noise3", derive_seed(0, results[0].image, "noise3"), engine.config)
    noisy = engine_module.apply_noise(clean, noise)
    for row in results:
        filtered = original(noisy, FilterSpec(kind="median", approach=row.approach))
        assert row.metrics.psnr == psnr(clean, filtered)


def test_unknown_executor_is_rejected(small_experiment):
    with pytest.raises(ValueError, match="executor"):
        BenchEngine(FilteringConfig(executor="cluster")).run(small_experiment())


def test_process_and_thread_executors_agree(small_experiment):
    experiment = small_experiment(images=two_images(), denoise_approaches=["marginal", "vm"],
                                  noises=["clean", "noise6"])
    threaded = BenchEngine(FilteringConfig(executor="thread")).run(experiment)
    forked = BenchEngine(FilteringConfig(executor="process", max_workers=2)).run(experiment)
    assert threaded == forked

