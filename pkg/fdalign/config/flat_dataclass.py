"""Flat view of a nested config dataclass.

Every leaf field becomes one attribute of a generated FlatClass: top-level
fields keep their name, fields of a nested config are prefixed with the
snake_case name of their class (`LossWeightsConfig.p` ->
`loss_weights_config_p`). Each attribute maps onto one command-line flag.
"""
import json
from argparse import SUPPRESS, ArgumentParser, BooleanOptionalAction
from dataclasses import MISSING, dataclass, field, fields, make_dataclass
from functools import lru_cache
from typing import (
    Any,
    Dict,
    List,
    Optional,
    Tuple,
    get_args,
    get_origin,
    get_type_hints,
)

from fdalign.config.utils import (
    PRIMITIVE_TYPES,
    is_config_dataclass,
    to_snake_case,
    unwrap_optional,
)


@dataclass(frozen=True)
class LeafField:
    flat_name: str
    # attribute names from the root config down to this field
    path: Tuple[str, ...]
    field_type: Any
    default: Any
    default_factory: Any
    help: Optional[str]


def collect_leaves(root: type) -> List[LeafField]:
    leaves = []

    def walk(config_class: type, path: Tuple[str, ...], prefix: str) -> None:
        type_hints = get_type_hints(config_class)
        for f in fields(config_class):
            field_type = unwrap_optional(type_hints[f.name])
            if is_config_dataclass(field_type):
                walk(field_type, path + (f.name,), f"{to_snake_case(field_type.__name__)}_")
                continue
            leaves.append(
                LeafField(
                    flat_name=f"{prefix}{f.name}",
                    path=path + (f.name,),
                    field_type=field_type,
                    default=f.default,
                    default_factory=f.default_factory,
                    help=f.metadata.get("help"),
                )
            )

    walk(root, (), "")
    names = [leaf.flat_name for leaf in leaves]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise TypeError(f"{root.__name__}: flat field names collide: {duplicates}")
    return leaves


def argument_options(leaf: LeafField) -> Dict[str, Any]:
    """argparse options of one leaf; defaults are suppressed so a parsed
    namespace only carries flags that were given explicitly."""
    options: Dict[str, Any] = {"default": SUPPRESS, "help": leaf.help}
    field_type = leaf.field_type
    origin = get_origin(field_type)

    if field_type is bool:
        options["action"] = BooleanOptionalAction
    elif origin is list:
        (item_type,) = get_args(field_type)
        if item_type in PRIMITIVE_TYPES:
            options.update(type=item_type, nargs="+")
        else:
            # nested lists are passed as one JSON value
            options["type"] = json.loads
    elif origin is dict:
        options["type"] = json.loads
    else:
        options["type"] = field_type
    return options


class FlatConfig:
    _root: type
    _leaves: List[LeafField]

    @classmethod
    def from_instance(cls, instance: Any) -> "FlatConfig":
        values = {}
        for leaf in cls._leaves:
            value = instance
            for name in leaf.path:
                value = getattr(value, name)
            values[leaf.flat_name] = value
        return cls(**values)

    def reconstruct_original_dataclass(self) -> Any:
        by_path = {leaf.path: leaf.flat_name for leaf in self._leaves}

        def build(config_class: type, path: Tuple[str, ...]) -> Any:
            type_hints = get_type_hints(config_class)
            kwargs = {}
            for f in fields(config_class):
                field_type = unwrap_optional(type_hints[f.name])
                if is_config_dataclass(field_type):
                    kwargs[f.name] = build(field_type, path + (f.name,))
                else:
                    kwargs[f.name] = getattr(self, by_path[path + (f.name,)])
            return config_class(**kwargs)

        return build(self._root, ())

    @classmethod
    def add_cli_arguments(cls, parser: ArgumentParser) -> None:
        for leaf in cls._leaves:
            parser.add_argument(f"--{leaf.flat_name}", **argument_options(leaf))


@lru_cache(maxsize=None)
def create_flat_dataclass(root: type) -> type:
    leaves = collect_leaves(root)
    specs = []
    for leaf in leaves:
        if leaf.default_factory is not MISSING:
            spec = field(default_factory=leaf.default_factory)
        elif leaf.default is not MISSING:
            spec = field(default=leaf.default)
        else:
            spec = field()
        specs.append((leaf.flat_name, leaf.field_type, spec))
    # fields without defaults have to come first
    specs.sort(
        key=lambda spec: spec[2].default is not MISSING
        or spec[2].default_factory is not MISSING
    )

    flat_class = make_dataclass("FlatClass", specs, bases=(FlatConfig,))
    flat_class._root = root
    flat_class._leaves = leaves
    return flat_class
