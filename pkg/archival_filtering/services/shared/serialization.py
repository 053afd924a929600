# File: archival_filtering/services/shared/serialization.py

from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any
import json
import logging
import math
import numbers

import numpy as np
from pydantic import BaseModel

logger = logging.getLogger(__name__)


def _float(value: float) -> Any:
    """JSON has no non-finite numbers; write them as the strings "inf", "-inf" and "nan"."""
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


def recursive_dict_conversion(obj: Any) -> Any:
    """Recursively convert objects to JSON-safe structures."""
    if obj is None:
        return None
    elif isinstance(obj, datetime):
        return obj.isoformat()
    elif isinstance(obj, Enum):
        return obj.value
    elif isinstance(obj, Path):
        return str(obj)
    elif isinstance(obj, bool):
        return obj
    elif isinstance(obj, (int, np.integer)):
        return int(obj)
    elif isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    elif isinstance(obj, str):
        return obj
    elif isinstance(obj, np.ndarray):
        return recursive_dict_conversion(obj.tolist())
    elif isinstance(obj, numbers.Number):
        return _float(float(obj))
    elif isinstance(obj, BaseModel):
        return recursive_dict_conversion(obj.model_dump(mode="json"))
    elif isinstance(obj, dict):
        return {recursive_dict_conversion(k): recursive_dict_conversion(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple, set)):
        return [recursive_dict_conversion(item) for item in obj]
    elif hasattr(obj, '__dict__'):
        return recursive_dict_conversion(vars(obj))
    return str(obj)


class BenchEncoder(json.JSONEncoder):
    """JSON encoder for bench payloads: models, numpy values, enums and paths."""

    def default(self, obj: Any) -> Any:
        try:
            return recursive_dict_conversion(obj)
        except Exception as e:
            logger.warning(f"Serialization fallback for {type(obj)}: {e}")
            return str(obj)


def dumps(obj: Any, **kwargs: Any) -> str:
    """Serialize with non-finite floats as strings; the output is strict JSON."""
    return json.dumps(recursive_dict_conversion(obj), cls=BenchEncoder, allow_nan=False, **kwargs)
