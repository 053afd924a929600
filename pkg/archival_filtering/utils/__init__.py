# archival_filtering/utils/__init__.py
from .decorators import log_execution, measure_performance
