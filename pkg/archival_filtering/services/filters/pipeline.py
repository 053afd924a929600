# archival_filtering/services/filters/pipeline.py
# Goals: Dispatch a FilterSpec to its registered filter stack.

from typing import Union
import logging

from archival_filtering.core.metaclasses import FilterStackMeta
from archival_filtering.models import FilterSpec
from archival_filtering.services.imaging import ColorImage, ScalarImage

logger = logging.getLogger(__name__)


def _stack(spec: FilterSpec):
    if not isinstance(spec, FilterSpec):
        spec = FilterSpec.model_validate(spec)
    return spec, FilterStackMeta.get_filter(spec.kind)()


def apply_denoise(img: ColorImage, spec: FilterSpec) -> ColorImage:
    """One pass for M/V; marginal-then-vector for MV; vector-then-marginal for VM."""
    spec, stack = _stack(spec)
    if spec.kind.is_edge:
        raise ValueError(f"{spec.kind.value} is an edge filter, not a denoising filter")
    result = img
    for single in spec.approach.passes:
        result = stack.apply(result, single)
    return result


def apply_edge(img: ColorImage, spec: FilterSpec) -> ScalarImage:
    spec, stack = _stack(spec)
    if not spec.kind.is_edge:
        raise ValueError(f"{spec.kind.value} is a denoising filter, not an edge filter")
    return stack.apply(img, spec.approach)


def apply_filter(img: ColorImage, spec: FilterSpec) -> Union[ColorImage, ScalarImage]:
    spec, _ = _stack(spec)
    return apply_edge(img, spec) if spec.kind.is_edge else apply_denoise(img, spec)
