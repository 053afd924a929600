# archival_filtering/services/bench/reporting.py
# Goals: CSV/JSON emission of bench rows, per-cell summaries and directional findings.

from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Tuple, Union
import csv
import json
import logging
import math

import numpy as np

from archival_filtering.core.config import FilteringConfig
from archival_filtering.models import (
    CLEAN,
    Approach,
    BenchResult,
    ColorSpace,
    ExperimentConfig,
    FilterKind,
    Findings,
    Summary,
    SummaryCell,
)
from archival_filtering.services.noise import RNG_ALGORITHM
from archival_filtering.services.shared.serialization import dumps

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

CSV_HEADER = ("image", "space", "filter", "approach", "noise", "seed", "psnr_db", "sr", "rsc", "ms", "error")

# metric -> True when larger is better
METRICS: Dict[str, bool] = {"psnr": True, "sr": False, "rsc": True}
DENOISE_METRICS = ("psnr", "sr")
DUAL_APPROACHES = (Approach.MARGINAL_THEN_VECTOR, Approach.VECTOR_THEN_MARGINAL)
SUMMATION_ORDER = "numpy pairwise summation over row-major pixel order"


def format_float(value: Optional[float]) -> str:
    """Six significant digits; empty for missing values, "inf"/"-inf"/"nan" for non-finite ones."""
    if value is None:
        return ""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.6g}"


def csv_row(result: BenchResult) -> List[str]:
    m = result.metrics
    return [
        result.image,
        result.space.value,
        result.filter.value,
        result.approach.value,
        result.noise,
        str(result.seed),
        format_float(m.psnr),
        format_float(m.sr),
        format_float(m.rsc),
        format_float(result.ms),
        result.error or "",
    ]


def emit_csv(results: Iterable[BenchResult], path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for result in results:
            writer.writerow(csv_row(result))
    logger.info(f"Wrote CSV results to {path}")
    return path


def build_meta(experiment: Optional[ExperimentConfig] = None,
               config: Optional[FilteringConfig] = None) -> Dict[str, Any]:
    """Run metadata written next to the rows: RNG, peak, noise parameters and reduction order."""
    config = config or FilteringConfig()
    meta: Dict[str, Any] = {
        "rng": RNG_ALGORITHM,
        "psnr_peak": config.psnr_peak,
        "sr_tile": config.sr_tile,
        "rsc_epsilon": config.rsc_epsilon,
        "rsc_ratio_cap": config.rsc_ratio_cap,
        "summation_order": SUMMATION_ORDER,
    }
    if experiment is not None:
        noise_parameters = {}
        for noise_id in experiment.noises:
            if noise_id == CLEAN:
                continue
            spec = experiment.noise_spec(noise_id, 0, config)
            noise_parameters[noise_id] = {
                "kind": spec.kind.value,
                "strength": spec.strength.value,
                "parameter": spec.parameter,
                "chosen_default": noise_id not in experiment.noise_parameters,
            }
        meta.update({
            "noise_parameters": noise_parameters,
            "segment_length": experiment.segment_length,
            "lee": experiment.lee.model_dump() if experiment.lee else None,
            "record_timing": experiment.record_timing,
        })
    return meta


def emit_json(results: Iterable[BenchResult], path: PathLike, meta: Optional[Dict[str, Any]] = None) -> Path:
    """Rows as BenchResult objects under "results"; PSNR +inf is written as "inf"."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {
        "meta": meta if meta is not None else build_meta(),
        "results": [r.model_dump(mode="json") for r in results],
    }
    path.write_text(dumps(payload, indent=2) + "\n", encoding="utf-8")
    logger.info(f"Wrote JSON results to {path}")
    return path


def load_json(path: PathLike) -> Tuple[Dict[str, Any], List[BenchResult]]:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    return payload.get("meta", {}), [BenchResult.model_validate(r) for r in payload.get("results", [])]


def _mean(values: List[float]) -> float:
    arr = np.asarray(values, dtype=np.float64)
    if np.isposinf(arr).any():
        return math.inf
    return float(np.mean(arr))


def _winner(means: Dict[Approach, float], larger_is_better: bool) -> Approach:
    """Best mean; ties go to the earlier approach in M, V, MV, VM order."""
    best = None
    for approach in sorted(means, key=lambda a: a.rank):
        value = means[approach]
        if best is None:
            best = approach
            continue
        current = means[best]
        if (value > current) if larger_is_better else (value < current):
            best = approach
    return best


def summarize(results: Iterable[BenchResult]) -> Summary:
    """Mean metric per approach for each (filter, noise, space, metric) cell, the cell winners
    and the fraction of cells each approach wins. Rows with errors are left out."""
    results = list(results)
    if not results:
        raise ValueError("Cannot summarize an empty result list")

    buckets: Dict[Tuple[FilterKind, str, ColorSpace, str], Dict[Approach, List[float]]] = defaultdict(
        lambda: defaultdict(list))
    for result in results:
        if result.error:
            continue
        for metric in METRICS:
            value = getattr(result.metrics, metric)
            if value is None or math.isnan(value):
                continue
            buckets[(result.filter, result.noise, result.space, metric)][result.approach].append(value)

    metric_order = list(METRICS)
    cells = []
    for (kind, noise, space, metric) in sorted(
            buckets, key=lambda k: (k[0].value, k[1], k[2].value, metric_order.index(k[3]))):
        means = {a: _mean(v) for a, v in buckets[(kind, noise, space, metric)].items()}
        cells.append(SummaryCell(filter=kind, noise=noise, space=space, metric=metric, means=means,
                                 winner=_winner(means, METRICS[metric])))

    win_fractions: Dict[str, Dict[Approach, float]] = {}
    for metric in metric_order:
        metric_cells = [c for c in cells if c.metric == metric]
        if not metric_cells:
            continue
        approaches = sorted({a for c in metric_cells for a in c.means}, key=lambda a: a.rank)
        win_fractions[metric] = {
            a: sum(c.winner is a for c in metric_cells) / len(metric_cells) for a in approaches
        }
    return Summary(cells=cells, win_fractions=win_fractions)


def _win_fraction(cells: List[SummaryCell], approaches: Tuple[Approach, ...]) -> float:
    return sum(c.winner in approaches for c in cells) / len(cells)


def findings(summary: Summary) -> Findings:
    """How often marginal and dual approaches win the noisy RGB denoising cells, RGB/HSB agreement
    on noisy denoising cells and the R_SC vector/marginal ratio."""
    noisy = [c for c in summary.cells if c.metric in DENOISE_METRICS and c.noise != CLEAN]

    marginal, dual = {}, {}
    for metric in DENOISE_METRICS:
        rgb_cells = [c for c in noisy if c.metric == metric and c.space is ColorSpace.RGB]
        if not rgb_cells:
            continue
        marginal[metric] = _win_fraction(rgb_cells, (Approach.MARGINAL,))
        dual[metric] = _win_fraction(rgb_cells, DUAL_APPROACHES)

    winners = defaultdict(dict)
    for cell in noisy:
        winners[(cell.filter, cell.noise, cell.metric)][cell.space] = cell.winner
    paired = [w for w in winners.values() if ColorSpace.RGB in w and ColorSpace.HSB in w]
    agreement = (sum(w[ColorSpace.RGB] is w[ColorSpace.HSB] for w in paired) / len(paired)) if paired else None

    sums: Dict[FilterKind, List[float]] = defaultdict(lambda: [0.0, 0.0])
    for cell in summary.cells:
        if cell.metric != "rsc":
            continue
        m, v = cell.means.get(Approach.MARGINAL), cell.means.get(Approach.VECTOR)
        if m is None or v is None:
            continue
        sums[cell.filter][0] += m
        sums[cell.filter][1] += v
    ratio = {kind: (v / m if m > 0 else None) for kind, (m, v) in sums.items()}

    return Findings(marginal_win_fraction=marginal, dual_win_fraction=dual,
                    space_agreement=agreement, rsc_vector_ratio=ratio)
