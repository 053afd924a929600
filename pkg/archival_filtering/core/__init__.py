# archival_filtering/core/__init__.py
# Revision No: 002
# Goals: Initialize core package.

from .context import ExperimentContext
from .config import FilteringConfig
