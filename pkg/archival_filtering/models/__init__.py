# archival_filtering/models/__init__.py
# Goals: Expose the domain models.

from .pydantic_models import (
    CLEAN,
    NOISE_IDS,
    Approach,
    BenchResult,
    ColorSpace,
    Direction,
    ExperimentConfig,
    Findings,
    FilterKind,
    FilterSpec,
    ImageSource,
    LeeParams,
    MetricReport,
    NoiseKind,
    NoiseSpec,
    NoiseStrength,
    Summary,
    SummaryCell,
    SyntheticSource,
)
