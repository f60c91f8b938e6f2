from dataclasses import fields, is_dataclass
from typing import Any, Union, get_args, get_origin, get_type_hints

PRIMITIVE_TYPES = (int, str, float, bool)


def to_snake_case(name: str) -> str:
    return "".join(["_" + c.lower() if c.isupper() else c for c in name]).lstrip("_")


def unwrap_optional(field_type: Any) -> Any:
    """Optional[X] -> X; other types unchanged."""
    if get_origin(field_type) is Union:
        args = [arg for arg in get_args(field_type) if arg is not type(None)]
        if len(args) == 1:
            return args[0]
    return field_type


def is_config_dataclass(field_type: Any) -> bool:
    return isinstance(field_type, type) and is_dataclass(field_type)


def dataclass_to_dict(obj):
    """Serializes a config tree; only declared fields are written so the
    result feeds straight back into `dataclass_from_dict`."""
    if isinstance(obj, (list, tuple)):
        return [dataclass_to_dict(item) for item in obj]
    if isinstance(obj, dict):
        return {key: dataclass_to_dict(value) for key, value in obj.items()}
    if is_dataclass(obj):
        return {f.name: dataclass_to_dict(getattr(obj, f.name)) for f in fields(obj)}
    return obj


def dataclass_from_dict(cls, data: dict) -> Any:
    """Builds `cls` from a (possibly partial) nested dict; missing keys keep
    their defaults and unknown keys raise KeyError."""
    type_hints = get_type_hints(cls)
    unknown = set(data) - {f.name for f in fields(cls)}
    if unknown:
        raise KeyError(f"unknown {cls.__name__} keys: {sorted(unknown)}")

    kwargs = {}
    for name, value in data.items():
        field_type = unwrap_optional(type_hints[name])
        if is_config_dataclass(field_type) and isinstance(value, dict):
            value = dataclass_from_dict(field_type, value)
        kwargs[name] = value
    return cls(**kwargs)
