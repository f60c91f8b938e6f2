from abc import ABC, abstractmethod
from argparse import ArgumentParser, Namespace
from typing import Any, Dict

from fdalign.config import RunConfig
from fdalign.data import Dataset, load_dataset
from fdalign.errors import CheckpointError
from fdalign.model import Model, load_checkpoint
from fdalign.types import CommandType


class BaseCommand(ABC):
    help: str = ""

    def __init__(self, config: RunConfig, args: Namespace) -> None:
        self._config = config
        self._args = args

    @staticmethod
    @abstractmethod
    def get_type() -> CommandType:
        pass

    @classmethod
    def add_arguments(cls, parser: ArgumentParser) -> None:
        """Command specific flags on top of the shared config flags."""

    @classmethod
    def config_overrides(cls, args: Namespace) -> Dict[str, Any]:
        """Flat config values implied by command specific flags."""
        return {}

    @abstractmethod
    def run(self) -> int:
        pass

    def _load_dataset(self) -> Dataset:
        return load_dataset(self._config.dataset_dir)

    def _load_model_for(self, dataset: Dataset) -> Model:
        path = self._config.resolved_checkpoint_dir
        model = load_checkpoint(path)
        if model.config.num_classes != dataset.num_classes:
            raise CheckpointError(
                f"checkpoint {path} has {model.config.num_classes} classes but the"
                f" dataset at {self._config.dataset_dir} has {dataset.num_classes}"
            )
        if model.config.input_size != dataset.spec.image_size:
            raise CheckpointError(
                f"checkpoint {path} expects {model.config.input_size}px inputs but the"
                f" dataset at {self._config.dataset_dir} holds"
                f" {dataset.spec.image_size}px images"
            )
        return model
