from .filter_meta import FilterStackMeta
