from enum import IntEnum
from typing import List

from fdalign.errors import ConfigError


class BaseIntEnum(IntEnum):
    def __str__(self):
        return self.name.lower()

    @classmethod
    def choices(cls) -> List[str]:
        return [str(member) for member in cls]

    @classmethod
    def from_str(cls, string):
        try:
            return cls[string.upper().replace("-", "_")]
        except (KeyError, AttributeError):
            raise ConfigError(
                f"invalid {cls.__name__} '{string}', expected one of {cls.choices()}"
            ) from None
