from __future__ import annotations

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import yaml
from pydantic import BaseModel, ConfigDict, Field, field_serializer, field_validator, model_validator

from archival_filtering.core.config import FilteringConfig


class ColorSpace(str, Enum):
    RGB = "rgb"
    HSB = "hsb"


class Approach(str, Enum):
    """Filtering strategy for a color image."""
    MARGINAL = "marginal"
    VECTOR = "vector"
    MARGINAL_THEN_VECTOR = "mv"
    VECTOR_THEN_MARGINAL = "vm"

    @property
    def is_dual(self) -> bool:
        return self in (Approach.MARGINAL_THEN_VECTOR, Approach.VECTOR_THEN_MARGINAL)

    @property
    def passes(self) -> Tuple["Approach", ...]:
        """Single-approach passes applied in order."""
        if self is Approach.MARGINAL_THEN_VECTOR:
            return (Approach.MARGINAL, Approach.VECTOR)
        if self is Approach.VECTOR_THEN_MARGINAL:
            return (Approach.VECTOR, Approach.MARGINAL)
        return (self,)

    @property
    def rank(self) -> int:
        """Position in the tie-break order M, V, MV, VM."""
        return list(Approach).index(self)


class FilterKind(str, Enum):
    MEAN = "mean"
    MEDIAN = "median"
    MORPH_DENOISE = "morph_denoise"
    LAPLACIAN = "laplacian"
    SOBEL = "sobel"
    MORPH_GRADIENT = "morph_gradient"

    @property
    def is_edge(self) -> bool:
        return self in (FilterKind.LAPLACIAN, FilterKind.SOBEL, FilterKind.MORPH_GRADIENT)


class NoiseKind(str, Enum):
    GAUSSIAN = "gaussian"
    SPECKLE = "speckle"
    SALT_PEPPER = "salt_pepper"


class NoiseStrength(str, Enum):
    WEAK = "weak"
    STRONG = "strong"


CLEAN = "clean"

# noise identifiers used throughout the bench
NOISE_IDS: Dict[str, Tuple[NoiseKind, NoiseStrength]] = {
    "noise1": (NoiseKind.GAUSSIAN, NoiseStrength.WEAK),
    "noise2": (NoiseKind.GAUSSIAN, NoiseStrength.STRONG),
    "noise3": (NoiseKind.SPECKLE, NoiseStrength.WEAK),
    "noise4": (NoiseKind.SPECKLE, NoiseStrength.STRONG),
    "noise5": (NoiseKind.SALT_PEPPER, NoiseStrength.WEAK),
    "noise6": (NoiseKind.SALT_PEPPER, NoiseStrength.STRONG),
}


class Direction(str, Enum):
    """Scan directions for the R_SC statistics."""
    HORIZONTAL = "horizontal"
    DIAGONAL = "diagonal"
    VERTICAL = "vertical"
    ANTI_DIAGONAL = "anti_diagonal"

    @property
    def angle(self) -> int:
        return {"horizontal": 0, "diagonal": 45, "vertical": 90, "anti_diagonal": 135}[self.value]

    @property
    def step(self) -> Tuple[int, int]:
        """(row, column) offset of one step towards side z1."""
        return {
            "horizontal": (0, 1),
            "diagonal": (-1, 1),
            "vertical": (1, 0),
            "anti_diagonal": (-1, -1),
        }[self.value]


class NoiseSpec(BaseModel):
    """One of the six degradation models with its parameter and seed."""
    model_config = ConfigDict(frozen=True)

    kind: NoiseKind = Field(..., description="Noise family.")
    strength: NoiseStrength = Field(..., description="Weak or strong variant.")
    parameter: float = Field(...,
                             description="Sigma in intensity levels (gaussian), variance (speckle) "
                                         "or fraction of pixels (salt_pepper).")
    seed: int = Field(0, ge=0, lt=2 ** 64, description="Seed of the PCG64 stream owned by this call.")

    @model_validator(mode="after")
    def _check_parameter(self) -> "NoiseSpec":
        p = self.parameter
        if not math.isfinite(p):
            raise ValueError("noise parameter must be finite")
        if self.kind is NoiseKind.GAUSSIAN and p <= 0:
            raise ValueError(f"gaussian sigma must be > 0, got {p}")
        if self.kind is NoiseKind.SPECKLE and not 0 < p < 1:
            raise ValueError(f"speckle variance must lie in (0, 1), got {p}")
        if self.kind is NoiseKind.SALT_PEPPER and not 0 < p < 1:
            raise ValueError(f"salt & pepper density must lie in (0, 1), got {p}")
        return self

    @property
    def noise_id(self) -> str:
        for noise_id, pair in NOISE_IDS.items():
            if pair == (self.kind, self.strength):
                return noise_id
        raise ValueError(f"No noise identifier for {self.kind}/{self.strength}")  # pragma: no cover

    @classmethod
    def from_id(cls, noise_id: str, seed: int = 0,
                config: Optional[FilteringConfig] = None,
                parameter: Optional[float] = None) -> "NoiseSpec":
        """Build a spec from a noise identifier ("noise1" .. "noise6")."""
        key = noise_id.lower().replace(" ", "")
        if key not in NOISE_IDS:
            raise ValueError(f"Unknown noise identifier: {noise_id}")
        kind, strength = NOISE_IDS[key]
        if parameter is None:
            parameter = (config or FilteringConfig()).noise_parameter(kind.value, strength.value)
        return cls(kind=kind, strength=strength, parameter=parameter, seed=seed)


class FilterSpec(BaseModel):
    """A filter kind with the approach it runs under. The kernel is always 3x3."""
    model_config = ConfigDict(frozen=True)

    kind: FilterKind
    approach: Approach = Approach.MARGINAL
    kernel: int = Field(3, description="Kernel side; only 3 is supported.")

    @field_validator("kernel")
    @classmethod
    def _kernel_is_3x3(cls, v: int) -> int:
        if v != 3:
            raise ValueError("only 3x3 kernels are supported")
        return v

    @model_validator(mode="after")
    def _edge_rejects_dual(self) -> "FilterSpec":
        if self.kind.is_edge and self.approach.is_dual:
            raise ValueError(f"{self.kind.value} is an edge filter; dual approach "
                             f"{self.approach.value} applies to denoising filters only")
        return self


class LeeParams(BaseModel):
    """Optional Lee pre-smoothing of the edge map before R_SC."""
    window: int = Field(5, ge=3, description="Odd side of the local statistics window.")
    noise_variance: Optional[float] = Field(None, ge=0,
                                            description="Noise variance; sample variance of the map when null.")

    @field_validator("window")
    @classmethod
    def _odd(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError("Lee window must be odd")
        return v


class MetricReport(BaseModel):
    """Metric values of one bench cell; inapplicable metrics are null."""
    psnr: Optional[float] = Field(None, description="Decibels; +inf when the images are identical.")
    sr: Optional[float] = Field(None, ge=0)
    rsc: Optional[float] = Field(None, ge=0)

    @field_validator("psnr", mode="before")
    @classmethod
    def _parse_inf(cls, v: Any) -> Any:
        if isinstance(v, str) and v.strip().lower() in ("inf", "+inf", "infinity"):
            return math.inf
        return v

    @field_serializer("psnr")
    def _serialize_psnr(self, v: Optional[float]) -> Any:
        if v is not None and math.isinf(v):
            return "inf"
        return v


class BenchResult(BaseModel):
    """One experiment-matrix cell for one seed."""
    image: str
    space: ColorSpace
    filter: FilterKind
    approach: Approach
    noise: str
    seed: int
    metrics: MetricReport = Field(default_factory=MetricReport)
    ms: Optional[float] = Field(None, description="Wall-clock milliseconds of filter + scoring.")
    error: Optional[str] = None

    def sort_key(self) -> Tuple[str, str, str, int, str, int]:
        return (self.image, self.space.value, self.filter.value, self.approach.rank, self.noise, self.seed)


class SyntheticSource(BaseModel):
    kind: str = Field("document", pattern="^(document|step)$")
    width: int = Field(512, ge=64)
    height: int = Field(512, ge=64)
    seed: int = Field(0, ge=0)


class ImageSource(BaseModel):
    """An input image: a file on disk or a synthetic generator spec."""
    id: Optional[str] = None
    path: Optional[Path] = None
    synthetic: Optional[SyntheticSource] = None

    @model_validator(mode="after")
    def _one_source(self) -> "ImageSource":
        if (self.path is None) == (self.synthetic is None):
            raise ValueError("image source needs exactly one of 'path' or 'synthetic'")
        return self

    @property
    def image_id(self) -> str:
        if self.id:
            return self.id
        if self.path is not None:
            return self.path.stem
        s = self.synthetic
        return f"synth-{s.kind}-{s.width}x{s.height}-s{s.seed}"


class ExperimentConfig(BaseModel):
    """The experiment matrix: images x spaces x noises x seeds x filter/approach pairs."""
    images: List[ImageSource] = Field(..., min_length=1)
    spaces: List[ColorSpace] = Field(default_factory=lambda: [ColorSpace.RGB], min_length=1)
    denoise_filters: List[FilterKind] = Field(
        default_factory=lambda: [FilterKind.MEDIAN, FilterKind.MORPH_DENOISE])
    denoise_approaches: List[Approach] = Field(default_factory=lambda: list(Approach))
    edge_filters: List[FilterKind] = Field(default_factory=list)
    edge_approaches: List[Approach] = Field(
        default_factory=lambda: [Approach.MARGINAL, Approach.VECTOR])
    noises: List[str] = Field(default_factory=lambda: [CLEAN, *NOISE_IDS], min_length=1)
    seeds: List[int] = Field(default_factory=lambda: [0], min_length=1)
    noise_parameters: Dict[str, float] = Field(default_factory=dict,
                                               description="Per noise id parameter overrides.")
    segment_length: int = Field(3, ge=2)
    lee: Optional[LeeParams] = None
    record_timing: bool = True
    max_workers: int = Field(4, ge=1)
    csv_path: Optional[Path] = None
    json_path: Optional[Path] = None

    @field_validator("noises")
    @classmethod
    def _known_noises(cls, v: List[str]) -> List[str]:
        normalized = [n.lower() for n in v]
        unknown = [n for n in normalized if n != CLEAN and n not in NOISE_IDS]
        if unknown:
            raise ValueError(f"Unknown noise identifiers: {unknown}")
        return normalized

    @model_validator(mode="after")
    def _check_filters(self) -> "ExperimentConfig":
        bad_denoise = [k.value for k in self.denoise_filters if k.is_edge]
        if bad_denoise:
            raise ValueError(f"Edge filters listed as denoise filters: {bad_denoise}")
        bad_edge = [k.value for k in self.edge_filters if not k.is_edge]
        if bad_edge:
            raise ValueError(f"Denoise filters listed as edge filters: {bad_edge}")
        if any(a.is_dual for a in self.edge_approaches):
            raise ValueError("Edge filters accept only the marginal and vector approaches")
        denoise_pairs = len(self.denoise_filters) * len(self.denoise_approaches)
        edge_pairs = len(self.edge_filters) * len(self.edge_approaches)
        if denoise_pairs + edge_pairs == 0:
            raise ValueError("Experiment needs at least one filter/approach pair")
        return self

    def denoise_specs(self) -> List[FilterSpec]:
        return [FilterSpec(kind=k, approach=a) for k in self.denoise_filters for a in self.denoise_approaches]

    def edge_specs(self) -> List[FilterSpec]:
        return [FilterSpec(kind=k, approach=a) for k in self.edge_filters for a in self.edge_approaches]

    def noise_spec(self, noise_id: str, seed: int, config: Optional[FilteringConfig] = None) -> NoiseSpec:
        return NoiseSpec.from_id(noise_id, seed=seed, config=config,
                                 parameter=self.noise_parameters.get(noise_id))

    @classmethod
    def from_file(cls, path: Path) -> "ExperimentConfig":
        """Load from a JSON or YAML file; relative image paths resolve against the file."""
        path = Path(path)
        if not path.exists():
            raise FileNotFoundError(f"Experiment config not found: {path}")
        with open(path) as f:
            data = json.load(f) if path.suffix.lower() == ".json" else yaml.safe_load(f)
        config = cls.model_validate(data or {})
        for source in config.images:
            if source.path is not None and not source.path.is_absolute():
                source.path = path.parent / source.path
        return config


class SummaryCell(BaseModel):
    """Mean metric per approach for one (filter, noise, space, metric) cell."""
    filter: FilterKind
    noise: str
    space: ColorSpace
    metric: str
    means: Dict[Approach, Optional[float]]
    winner: Approach


class Summary(BaseModel):
    cells: List[SummaryCell] = Field(default_factory=list)
    win_fractions: Dict[str, Dict[Approach, float]] = Field(
        default_factory=dict, description="metric -> approach -> fraction of that metric's cells won")


class Findings(BaseModel):
    """Directional statistics of a summary, compared against the study's qualitative claims."""
    marginal_win_fraction: Dict[str, float] = Field(
        default_factory=dict, description="Denoising metric -> fraction of noisy RGB cells won by the marginal approach.")
    dual_win_fraction: Dict[str, float] = Field(
        default_factory=dict, description="Denoising metric -> fraction of noisy RGB cells won by MV or VM.")
    space_agreement: Optional[float] = Field(
        None, description="Fraction of noisy (filter, noise, denoising metric) cells whose RGB and HSB winners agree.")
    rsc_vector_ratio: Dict[FilterKind, Optional[float]] = Field(
        default_factory=dict, description="Edge filter -> mean R_SC(vector) / mean R_SC(marginal).")
