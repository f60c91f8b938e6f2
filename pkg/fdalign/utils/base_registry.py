from abc import ABC
from typing import Any, List

from fdalign.errors import InvalidArgumentError
from fdalign.types import BaseIntEnum


class BaseRegistry(ABC):
    _key_class = BaseIntEnum

    def __init_subclass__(cls, **kwargs):
        super().__init_subclass__(**kwargs)
        cls._registry = {}

    @classmethod
    def register(cls, key: BaseIntEnum, implementation_class: Any) -> None:
        registered = cls._registry.get(key)
        if registered is implementation_class:
            return
        if registered is not None:
            raise InvalidArgumentError(
                f"{cls.__name__}: {key} is already bound to {registered.__name__}"
            )
        cls._registry[key] = implementation_class

    @classmethod
    def get_class(cls, key: BaseIntEnum) -> Any:
        if key not in cls._registry:
            raise InvalidArgumentError(
                f"{cls.__name__}: {key} is not registered, known keys are"
                f" {[str(known) for known in cls._registry]}"
            )
        return cls._registry[key]

    @classmethod
    def get(cls, key: BaseIntEnum, *args, **kwargs) -> Any:
        return cls.get_class(key)(*args, **kwargs)

    @classmethod
    def keys(cls) -> List[BaseIntEnum]:
        return list(cls._registry.keys())

    @classmethod
    def get_key_from_str(cls, key_str: str) -> BaseIntEnum:
        return cls._key_class.from_str(key_str)

    @classmethod
    def get_from_str(cls, key_str: str, *args, **kwargs) -> Any:
        return cls.get(cls.get_key_from_str(key_str), *args, **kwargs)
