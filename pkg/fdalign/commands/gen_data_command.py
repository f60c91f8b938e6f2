import json
import os
from argparse import ArgumentParser
from typing import Any, Dict

from fdalign.commands.base_command import BaseCommand
from fdalign.data import DatasetSpec, generate, run_marker_probe, save_dataset
from fdalign.data.dataset_io import index_path
from fdalign.errors import DatasetExistsError
from fdalign.logger import init_logger
from fdalign.types import CommandType, SplitType

logger = init_logger(__name__)

MARKER_PROBE_FILE_NAME = "marker_probe.json"


class GenDataCommand(BaseCommand):
    help = "Generate the synthetic localization dataset."

    @staticmethod
    def get_type() -> CommandType:
        return CommandType.GEN_DATA

    @classmethod
    def add_arguments(cls, parser: ArgumentParser) -> None:
        parser.add_argument(
            "--classes",
            type=int,
            help="Number of classes; sets the dataset and model class counts.",
        )
        parser.add_argument(
            "--force", action="store_true", help="Overwrite an existing dataset."
        )

    @classmethod
    def config_overrides(cls, args) -> Dict[str, Any]:
        if args.classes is None:
            return {}
        return {
            "dataset_config_num_classes": args.classes,
            "model_config_num_classes": args.classes,
        }

    def run(self) -> int:
        directory = self._config.dataset_dir
        if os.path.exists(index_path(directory)) and not self._args.force:
            raise DatasetExistsError(
                f"dataset already exists at {index_path(directory)}; pass --force to"
                " overwrite"
            )

        spec = DatasetSpec.from_config(self._config.dataset_config, self._config.seed)
        dataset = generate(spec, show_progress=True)
        save_dataset(dataset, directory, force=self._args.force)

        if dataset.split(SplitType.TRAIN):
            probe = run_marker_probe(dataset, seed=self._config.seed)
            with open(os.path.join(directory, MARKER_PROBE_FILE_NAME), "w") as f:
                json.dump(probe.to_dict(), f, indent=2, sort_keys=True)
            if not probe.passed:
                logger.warning(
                    "Marker probe did not confirm a part-local class cue:"
                    f" {probe.to_dict()}"
                )
        return 0
