import json
import os

from fdalign.commands.base_command import BaseCommand
from fdalign.types import CommandType
from fdalign.utils.file_lock import exclusive_dir
from fdalign.verification import GradientSuite

GRADCHECK_FILE_NAME = "gradcheck.json"


class GradCheckCommand(BaseCommand):
    help = "Finite-difference check of every layer and loss on a tiny model."

    @staticmethod
    def get_type() -> CommandType:
        return CommandType.GRADCHECK

    def run(self) -> int:
        report = GradientSuite(self._config.grad_check_config, self._config.seed).run()
        with exclusive_dir(self._config.output_dir):
            with open(os.path.join(self._config.output_dir, GRADCHECK_FILE_NAME), "w") as f:
                json.dump(report.to_dict(), f, indent=2, sort_keys=True)
        report.raise_on_failure()
        return 0
