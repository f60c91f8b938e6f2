from argparse import SUPPRESS, ArgumentParser

from fdalign.commands.base_command import BaseCommand
from fdalign.evaluation import EvaluationResult, Evaluator
from fdalign.metrics import save_evaluation, save_sweep
from fdalign.types import CommandType


def add_checkpoint_arguments(parser: ArgumentParser) -> None:
    parser.add_argument(
        "--checkpoint",
        dest="checkpoint_dir",
        default=SUPPRESS,
        help="Checkpoint directory; defaults to <output_dir>/checkpoint.",
    )
    parser.add_argument(
        "--map-source",
        dest="eval_config_map_source",
        default=SUPPRESS,
        choices=["cam", "norm", "sim"],
        help="Localization map: CAM, norm map or similarity map.",
    )


class EvalCommand(BaseCommand):
    help = "Evaluate a checkpoint: Top-k/GT Loc, MaxBoxAccV2, PxAP and sweep."

    @staticmethod
    def get_type() -> CommandType:
        return CommandType.EVAL

    @classmethod
    def add_arguments(cls, parser: ArgumentParser) -> None:
        add_checkpoint_arguments(parser)

    def _evaluate(self) -> EvaluationResult:
        dataset = self._load_dataset()
        model = self._load_model_for(dataset)
        split = self._config.eval_config.split_type
        evaluator = Evaluator(model, self._config.eval_config)
        return evaluator.evaluate(dataset.split(split), str(split))

    def run(self) -> int:
        result = self._evaluate()
        save_evaluation(
            result, self._config.output_dir, self._config.metrics_config.store_plots
        )
        return 0


class SweepCommand(EvalCommand):
    help = "Write only the threshold sweep CSV of a checkpoint."

    @staticmethod
    def get_type() -> CommandType:
        return CommandType.SWEEP

    def run(self) -> int:
        self._config.eval_config.compute_pxap = False
        result = self._evaluate()
        save_sweep(
            result.sweep, self._config.output_dir, self._config.metrics_config.store_plots
        )
        return 0
