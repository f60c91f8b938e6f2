import os

from fdalign.commands.base_command import BaseCommand
from fdalign.errors import ConfigError
from fdalign.logger import log_to_file
from fdalign.trainer import Trainer
from fdalign.types import CommandType

TRAIN_LOG_FILE_NAME = "train.log"


class TrainCommand(BaseCommand):
    help = "Train a model with the warm and total objectives."

    @staticmethod
    def get_type() -> CommandType:
        return CommandType.TRAIN

    def run(self) -> int:
        dataset = self._load_dataset()
        if dataset.num_classes != self._config.model_config.num_classes:
            raise ConfigError(
                f"dataset at {self._config.dataset_dir} has {dataset.num_classes}"
                f" classes but the model is configured for"
                f" {self._config.model_config.num_classes}"
            )
        if dataset.spec.image_size != self._config.model_config.input_size:
            raise ConfigError(
                f"dataset images are {dataset.spec.image_size}px but the model expects"
                f" {self._config.model_config.input_size}px"
            )
        self._config.write_config_to_file()
        with log_to_file(os.path.join(self._config.output_dir, TRAIN_LOG_FILE_NAME)):
            Trainer(self._config, dataset).run()
        return 0
