# archival_filtering/services/shared/__init__.py
