# archival_filtering/services/bench/engine.py
# Revision No: 002
# Goals: Run the experiment matrix over a bounded worker pool and collect one row per cell.

from concurrent.futures import Executor, ProcessPoolExecutor, ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple
import asyncio
import logging
import os
import time
import zlib

import numpy as np

from archival_filtering.core.config import FilteringConfig
from archival_filtering.core.context import ExperimentContext
from archival_filtering.models import (
    CLEAN,
    BenchResult,
    Approach,
    ExperimentConfig,
    FilterKind,
    FilterSpec,
    ImageSource,
    LeeParams,
    MetricReport,
)
from archival_filtering.services.filters import apply_denoise, apply_edge
from archival_filtering.services.imaging import ColorImage, load_image, to_space
from archival_filtering.services.metrics import psnr, rsc, sr
from archival_filtering.services.noise import apply_noise
from archival_filtering.utils.decorators import measure_performance
from .synthetic import synthesize

logger = logging.getLogger(__name__)

EXECUTORS = {"process": ProcessPoolExecutor, "thread": ThreadPoolExecutor}

# (filter kind, passes run so far) -> (image after those passes, seconds of the last pass)
PassCache = Dict[Tuple[FilterKind, Tuple[Approach, ...]], Tuple[ColorImage, float]]


def derive_seed(seed: int, image_id: str, noise_id: str) -> int:
    """Independent noise seed per (image, noise, seed) cell, stable across runs and platforms."""
    sequence = np.random.SeedSequence([seed, zlib.crc32(image_id.encode()), zlib.crc32(noise_id.encode())])
    return int(sequence.generate_state(1, np.uint64)[0])


def matrix_size(experiment: ExperimentConfig) -> int:
    """Number of rows a run of `experiment` produces."""
    pairs = len(experiment.denoise_specs()) + len(experiment.edge_specs())
    return (len(experiment.images) * len(experiment.spaces) * len(experiment.noises)
            * len(experiment.seeds) * pairs)


def check_paths(experiment: ExperimentConfig) -> None:
    missing = [str(s.path) for s in experiment.images if s.path is not None and not s.path.exists()]
    if missing:
        raise FileNotFoundError(f"Experiment images not found: {', '.join(missing)}")


class BenchEngine:
    """Evaluates every (image, space, noise, seed, filter, approach) cell of an experiment."""

    def __init__(self, config: Optional[FilteringConfig] = None):
        self.config = config or FilteringConfig()

    def _lee(self, experiment: ExperimentConfig) -> Optional[LeeParams]:
        if experiment.lee is not None:
            return experiment.lee
        if self.config.lee_enabled:
            return LeeParams(window=self.config.lee_window)
        return None

    def _executor(self, workers: int) -> Executor:
        try:
            pool = EXECUTORS[self.config.executor]
        except KeyError:
            raise ValueError(f"Unknown executor {self.config.executor!r}; use one of {sorted(EXECUTORS)}") from None
        return pool(max_workers=workers)

    def _load(self, source: ImageSource) -> ColorImage:
        if source.synthetic is not None:
            return synthesize(source.synthetic)
        return load_image(source.path)

    @measure_performance(logger)
    async def run_matrix(self, experiment: ExperimentConfig) -> List[BenchResult]:
        """Run the whole matrix; rows come back sorted by BenchResult.sort_key."""
        check_paths(experiment)
        context = ExperimentContext(name="bench", expected_rows=matrix_size(experiment))
        workers = min(experiment.max_workers, max(self.config.max_workers, 1), os.cpu_count() or 1)
        context.set_variable("executor", self.config.executor)
        context.set_variable("workers", workers)
        loop = asyncio.get_running_loop()

        images: Dict[str, Tuple[Optional[ColorImage], Optional[str]]] = {}
        for source in experiment.images:
            image_id = source.image_id
            if image_id in images:
                raise ValueError(f"Duplicate image id in experiment: {image_id}")
            try:
                images[image_id] = (self._load(source), None)
            except Exception as e:
                logger.exception(f"Could not load image {image_id}")
                images[image_id] = (None, f"{type(e).__name__}: {e}")

        executor = self._executor(workers)

        async def run_group(image_id: str, noise_id: str, seed: int) -> List[BenchResult]:
            clean, load_error = images[image_id]
            rows = await loop.run_in_executor(
                executor, evaluate_group, self.config, experiment, image_id, clean, noise_id, seed, load_error)
            await context.record_rows(len(rows), [r.model_dump(mode="json") for r in rows if r.error])
            return rows

        try:
            groups = await asyncio.gather(*[
                run_group(image_id, noise_id, seed)
                for image_id in images
                for noise_id in experiment.noises
                for seed in experiment.seeds
            ])
        finally:
            executor.shutdown(wait=True)

        results = sorted((row for rows in groups for row in rows), key=BenchResult.sort_key)
        logger.info(f"Bench run finished: {context.summarize()}")
        if len(results) != context.expected_rows:
            raise RuntimeError(f"Bench produced {len(results)} rows, expected {context.expected_rows}")
        return results

    def run(self, experiment: ExperimentConfig) -> List[BenchResult]:
        """Blocking wrapper for callers without an event loop."""
        return asyncio.run(self.run_matrix(experiment))

    def evaluate_group(self, experiment: ExperimentConfig, image_id: str, clean: Optional[ColorImage],
                       noise_id: str, seed: int, load_error: Optional[str] = None) -> List[BenchResult]:
        """All rows sharing one corrupted RGB image: every space times every filter/approach pair."""
        specs = experiment.denoise_specs() + experiment.edge_specs()

        def row(space, spec: FilterSpec, **fields) -> BenchResult:
            return BenchResult(image=image_id, space=space, filter=spec.kind, approach=spec.approach,
                               noise=noise_id, seed=seed, **fields)

        corrupted = None
        error = load_error
        if error is None:
            try:
                if noise_id == CLEAN:
                    corrupted = clean
                else:
                    noise = experiment.noise_spec(noise_id, derive_seed(seed, image_id, noise_id), self.config)
                    corrupted = apply_noise(clean, noise)
            except Exception as e:
                logger.exception(f"Noise {noise_id} failed on {image_id} (seed {seed})")
                error = f"{type(e).__name__}: {e}"

        rows = []
        for space in experiment.spaces:
            if error is None:
                try:
                    reference = to_space(clean, space)
                    test = to_space(corrupted, space)
                except Exception as e:
                    logger.exception(f"Conversion of {image_id} to {space.value} failed")
                    rows.extend(row(space, spec, error=f"{type(e).__name__}: {e}") for spec in specs)
                    continue
                passes: PassCache = {}
                rows.extend(self.evaluate_cell(experiment, reference, test, spec, row(space, spec), passes)
                            for spec in specs)
            else:
                rows.extend(row(space, spec, error=error) for spec in specs)
        return rows

    @staticmethod
    def denoise_passes(img: ColorImage, spec: FilterSpec, passes: PassCache) -> Tuple[ColorImage, float]:
        """Apply `spec` one single-approach pass at a time, reusing passes already run on `img`.

        MV starts from the cached M result and VM from the cached V result. The seconds
        returned add up the cost of every pass the result depends on.
        """
        result, seconds, done = img, 0.0, ()
        for single in spec.approach.passes:
            done += (single,)
            key = (spec.kind, done)
            if key not in passes:
                start = time.perf_counter()
                filtered = apply_denoise(result, FilterSpec(kind=spec.kind, approach=single))
                passes[key] = (filtered, time.perf_counter() - start)
            result, took = passes[key]
            seconds += took
        return result, seconds

    def evaluate_cell(self, experiment: ExperimentConfig, reference: ColorImage, test: ColorImage,
                      spec: FilterSpec, result: BenchResult, passes: Optional[PassCache] = None) -> BenchResult:
        """Filter `test` and score it; failures land in the row's error field."""
        start = time.perf_counter()
        try:
            if spec.kind.is_edge:
                edge_map = apply_edge(test, spec)
                metrics = MetricReport(rsc=rsc(edge_map, experiment.segment_length, self._lee(experiment),
                                               self.config.rsc_epsilon, self.config.rsc_ratio_cap))
            else:
                filtered, filter_seconds = self.denoise_passes(test, spec, {} if passes is None else passes)
                # cached passes are charged at their original cost
                start = time.perf_counter() - filter_seconds
                metrics = MetricReport(psnr=psnr(reference, filtered, self.config.psnr_peak),
                                       sr=sr(reference, filtered, self.config.sr_tile))
        except Exception as e:
            logger.exception(f"Cell failed: {result.image} {result.space.value} {spec.kind.value}/"
                             f"{spec.approach.value} {result.noise} seed={result.seed}")
            return result.model_copy(update={"error": f"{type(e).__name__}: {e}"})

        elapsed = (time.perf_counter() - start) * 1000.0 if experiment.record_timing else None
        return result.model_copy(update={"metrics": metrics, "ms": elapsed})


def evaluate_group(config: FilteringConfig, experiment: ExperimentConfig, image_id: str,
                   clean: Optional[ColorImage], noise_id: str, seed: int,
                   load_error: Optional[str] = None) -> List[BenchResult]:
    """Process-pool entry point: one group evaluated by a fresh engine in the worker."""
    return BenchEngine(config).evaluate_group(experiment, image_id, clean, noise_id, seed, load_error)


def run_matrix(experiment: ExperimentConfig, config: Optional[FilteringConfig] = None) -> List[BenchResult]:
    """Synchronous entry point around BenchEngine.run_matrix."""
    return BenchEngine(config).run(experiment)

# Dependencies: asyncio, numpy, pydantic models, filters, metrics, noise, imaging
# Required Actions: None
# CLI Commands: archival-filtering bench
