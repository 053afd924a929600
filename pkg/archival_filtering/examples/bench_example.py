# archival_filtering/examples/bench_example.py
# Revision No: 001
# Goals: Demonstrate running an experiment matrix from Python.

import asyncio
import logging
from pathlib import Path

from archival_filtering.core.config import FilteringConfig
from archival_filtering.models import ExperimentConfig
from archival_filtering.services.bench import BenchEngine, build_meta, emit_csv, emit_json, findings, summarize

logging.basicConfig(level=logging.INFO)

CONFIG_DIR = Path(__file__).resolve().parents[1] / "config"


async def main():
    config = FilteringConfig.from_env()
    experiment = ExperimentConfig.from_file(CONFIG_DIR / "bench_edges.yml")

    engine = BenchEngine(config)
    results = await engine.run_matrix(experiment)

    out_dir = Path("./bench_results/edges")
    emit_csv(results, out_dir / "results.csv")
    emit_json(results, out_dir / "results.json", build_meta(experiment, config))

    result = findings(summarize(results))
    for kind, ratio in result.rsc_vector_ratio.items():
        print(f"{kind.value}: vector/marginal R_SC = {ratio}")


if __name__ == "__main__":
    asyncio.run(main())
