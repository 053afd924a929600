# archival_filtering/services/bench/__init__.py
# Goals: Expose the experiment-matrix harness.

from .synthetic import generate_step_image, generate_synthetic_document, render_document, synthesize
from .engine import BenchEngine, check_paths, derive_seed, matrix_size, run_matrix
from .reporting import (
    CSV_HEADER,
    build_meta,
    emit_csv,
    emit_json,
    findings,
    format_float,
    load_json,
    summarize,
)
