import os
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
from tqdm import tqdm

from fdalign.config import RunConfig
from fdalign.data import Dataset
from fdalign.errors import NonFiniteLossError, NonFiniteTensorError
from fdalign.evaluation import EvaluationResult, Evaluator, in_box_sim_mass_above
from fdalign.logger import init_logger
from fdalign.losses import BaseObjective, ObjectiveRegistry, stage_for_epoch
from fdalign.metrics import EpochRecord, MetricsStore, TrainLog, save_evaluation
from fdalign.model import SGD, Model, save_checkpoint
from fdalign.tensor import Tape
from fdalign.types import RngStreamType, SplitType, StageType
from fdalign.utils.random import make_rng

logger = init_logger(__name__)

CHECKPOINT_DIR_NAME = "checkpoint"
BEST_CHECKPOINT_DIR_NAME = "best_checkpoint"
TRAIN_LOG_FILE_NAME = "train_log.json"


@dataclass
class TrainingResult:
    model: Model
    train_log: TrainLog
    evaluation: Optional[EvaluationResult]


class Trainer:
    """Warm-stage then total-objective training on the synthetic train split.

    Batch order comes from the data-order stream and dropout masks from the
    dropout stream, so runs that differ only in loss weights see the same
    batches.
    """

    def __init__(self, config: RunConfig, dataset: Dataset) -> None:
        self._config = config
        self._dataset = dataset
        self._model = Model.initialize(config.model_config, config.seed)
        self._optimizer = SGD.from_config(self._model, config.optimizer_config)
        self._objectives: Dict[StageType, BaseObjective] = {
            stage: ObjectiveRegistry.get(stage, config.loss_weights_config)
            for stage in StageType
        }
        self._metric_store = MetricsStore(config)
        self._train_log = TrainLog(warm_epochs=config.loss_weights_config.warm_epochs)

        train = dataset.split(SplitType.TRAIN)
        self._train_pixels = np.stack([sample.pixels for sample in train]) if train else None
        self._train_labels = np.array([sample.label for sample in train], dtype=int)

    @property
    def model(self) -> Model:
        return self._model

    @property
    def train_log(self) -> TrainLog:
        return self._train_log

    def _evaluator(self) -> Evaluator:
        return Evaluator(self._model, self._config.eval_config)

    def _in_box_sim_mass(self) -> float:
        samples = self._dataset.split(self._config.eval_config.split_type)
        if not samples:
            return 0.0
        predictions = self._evaluator().predict(samples)
        return in_box_sim_mass_above(predictions.decomps, samples, 0.5)

    def _batch_images(self, indices: np.ndarray) -> np.ndarray:
        pixels = self._train_pixels[indices].astype(np.float64) / 255.0
        return np.ascontiguousarray(pixels.transpose(0, 3, 1, 2))

    def _train_step(self, epoch: int, step: int, indices: np.ndarray, objective: BaseObjective):
        rng = make_rng(self._config.seed, RngStreamType.DROPOUT, epoch, step)
        try:
            with Tape() as tape:
                losses = objective.compute(
                    self._model,
                    self._batch_images(indices),
                    self._train_labels[indices],
                    rng=rng,
                )
            tape.backward(losses.total)
            for name, param in self._model.parameters.items():
                if param.grad is not None and not np.isfinite(param.grad).all():
                    raise NonFiniteTensorError(f"gradient of {name} is not finite")
            self._optimizer.step()
        except NonFiniteTensorError as e:
            raise NonFiniteLossError(f"epoch {epoch} step {step}: {e}") from e
        return losses

    def _run_epoch(self, epoch: int) -> EpochRecord:
        config = self._config
        stage = stage_for_epoch(epoch, config.loss_weights_config.warm_epochs)
        objective = self._objectives[stage]

        num_samples = len(self._train_labels)
        order = make_rng(config.seed, RngStreamType.DATA_ORDER, epoch).permutation(num_samples)
        sums = {"L_CE": 0.0, "L_sim": 0.0, "L_norm": 0.0, "L_drop": 0.0}
        correct = 0

        for step, start in enumerate(range(0, num_samples, config.batch_size)):
            indices = order[start : start + config.batch_size]
            losses = self._train_step(epoch, step, indices, objective)
            values = losses.values()
            for key in sums:
                sums[key] += values[key] * len(indices)
            correct += int((losses.logits.argmax(axis=1) == self._train_labels[indices]).sum())
            logger.debug(f"epoch {epoch} step {step}: {values}")

        denominator = max(num_samples, 1)
        return EpochRecord(
            epoch=epoch,
            stage=stage,
            l_ce=sums["L_CE"] / denominator,
            l_sim=sums["L_sim"] / denominator,
            l_norm=sums["L_norm"] / denominator,
            l_drop=sums["L_drop"] / denominator,
            train_acc=correct / denominator,
            val_gt_loc=self._evaluator().validation_gt_loc(
                self._dataset.split(SplitType.VAL)
            ),
        )

    def run(self) -> TrainingResult:
        config = self._config
        output_dir = config.output_dir
        logger.info(
            f"Training {config.mode} model for {config.epochs} epochs on"
            f" {len(self._train_labels)} images (warm stage: "
            f"{config.loss_weights_config.warm_epochs} epochs)"
        )

        self._train_log.sim_mass_above_half_init = self._in_box_sim_mass()

        for epoch in tqdm(range(config.epochs), desc="epochs"):
            record = self._run_epoch(epoch)
            self._train_log.append(record)
            self._metric_store.on_epoch_end(record)
            logger.info(
                f"epoch {epoch} [{record.stage}] L_CE {record.l_ce:.4f}"
                f" L_sim {record.l_sim:.4f} L_norm {record.l_norm:.4f}"
                f" L_drop {record.l_drop:.4f} train_acc {record.train_acc:.4f}"
                f" val_gt_loc {record.val_gt_loc:.4f}"
            )
            if self._train_log.best_epoch == epoch:
                save_checkpoint(self._model, os.path.join(output_dir, BEST_CHECKPOINT_DIR_NAME))

        self._train_log.sim_mass_above_half_final = self._in_box_sim_mass()
        save_checkpoint(self._model, os.path.join(output_dir, CHECKPOINT_DIR_NAME))
        self._train_log.write(os.path.join(output_dir, TRAIN_LOG_FILE_NAME))
        self._metric_store.store_epoch_metrics()

        evaluation = None
        eval_split = config.eval_config.split_type
        samples = self._dataset.split(eval_split)
        if samples:
            evaluation = self._evaluator().evaluate(samples, str(eval_split))
            save_evaluation(evaluation, output_dir, config.metrics_config.store_plots)
            self._metric_store.store_eval_report(evaluation.report)

        self._metric_store.finish()
        logger.info(
            f"In-box similarity mass above 0.5: {self._train_log.sim_mass_above_half_init:.4f}"
            f" at init, {self._train_log.sim_mass_above_half_final:.4f} after training"
        )
        return TrainingResult(self._model, self._train_log, evaluation)
