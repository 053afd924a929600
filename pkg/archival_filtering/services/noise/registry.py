from typing import Any, Callable, Dict, List

from archival_filtering.models import NoiseKind

NoiseModel = Callable[..., Any]


class NoiseRegistry:
    """Registry of degradation models keyed by noise kind."""

    _models: Dict[NoiseKind, NoiseModel] = {}

    @classmethod
    def register(cls, kind: NoiseKind) -> Callable[[NoiseModel], NoiseModel]:
        """Register the decorated function as the model for `kind`."""

        def decorator(func: NoiseModel) -> NoiseModel:
            cls._models[NoiseKind(kind)] = func
            return func

        return decorator

    @classmethod
    def get_model(cls, kind: NoiseKind) -> NoiseModel:
        try:
            return cls._models[NoiseKind(kind)]
        except (KeyError, ValueError):
            raise ValueError(f"Unknown noise kind: {kind} (registered: {cls.get_all_models()})") from None

    @classmethod
    def get_all_models(cls) -> List[str]:
        return [kind.value for kind in cls._models]
