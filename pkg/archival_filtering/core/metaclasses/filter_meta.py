# archival_filtering/core/metaclasses/filter_meta.py
# Revision No: 002
# Goals: Define metaclass for filter stacks that registers them by kind and validates methods.

from typing import Dict, Type, ClassVar
from abc import ABCMeta


class FilterStackMeta(ABCMeta):
    """Metaclass for filter stacks that registers kinds and validates methods."""

    _registry: ClassVar[Dict[str, Type]] = {}
    required_methods = ('marginal', 'vector')

    def __new__(mcs, name, bases, namespace):
        cls = super().__new__(mcs, name, bases, namespace)

        # Abstract bases carry no kind
        kind = namespace.get('kind')
        if kind is None:
            return cls

        missing = [
            method for method in mcs.required_methods
            if getattr(cls, method, None) is None
            or getattr(getattr(cls, method), '__isabstractmethod__', False)
        ]
        if missing:
            raise TypeError(f"Filter stack {name} missing required methods: {set(missing)}")

        key = getattr(kind, 'value', kind)
        if key in mcs._registry:
            raise TypeError(f"Filter kind {key} already registered by {mcs._registry[key].__name__}")
        mcs._registry[key] = cls
        return cls

    @classmethod
    def get_registered_filters(mcs) -> Dict[str, Type]:
        """Get all registered filter stacks keyed by kind value."""
        return mcs._registry.copy()

    @classmethod
    def get_filter(mcs, kind) -> Type:
        key = getattr(kind, 'value', kind)
        try:
            return mcs._registry[key]
        except KeyError:
            raise ValueError(f"Unknown filter kind: {key}") from None

# Dependencies: typing, abc
# Required Actions: None
# CLI Commands: None
