# archival_filtering/__init__.py
# Goals: Marginal, vector and dual color filtering of archival document images.

__version__ = "0.1.0"
