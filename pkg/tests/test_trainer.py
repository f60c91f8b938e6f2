import os

import pandas as pd
import pytest

from fdalign.config import EvalConfig, LossWeightsConfig, ModelConfig, RunConfig
from fdalign.metrics import TrainLog
from fdalign.model import load_checkpoint
from fdalign.trainer import Trainer
from fdalign.types import StageType


def run_config(output_dir, dataset_config, mode="full", seed=42):
    return RunConfig(
        seed=seed,
        mode=mode,
        epochs=2,
        batch_size=4,
        output_dir=str(output_dir),
        dataset_config=dataset_config,
        model_config=ModelConfig(
            input_size=32,
            conv_blocks=[[4, 3, 2], [6, 3, 2]],
            drop_layer_index=0,
            num_classes=3,
            feature_dim=6,
        ),
        loss_weights_config=LossWeightsConfig(warm_epochs=1),
        eval_config=EvalConfig(tau_grid_size=11, validation_tau_grid_size=5),
    )


@pytest.fixture
def full_run(tmp_path, small_dataset_config, small_dataset):
    config = run_config(tmp_path / "full", small_dataset_config)
    return config, Trainer(config, small_dataset).run()


def test_stages_follow_warm_epochs(full_run):
    _, result = full_run
    records = result.train_log.records

    assert [record.stage for record in records] == [StageType.WARM, StageType.TOTAL]
    # alignment terms are inactive in the warm stage
    assert records[0].l_sim == 0.0
    assert records[0].l_norm == 0.0
    assert -2.0 <= records[1].l_sim <= 2.0
    assert records[1].l_sim != 0.0


def test_outputs_written(full_run):
    config, result = full_run
    output_dir = config.output_dir

    for name in (
        "checkpoint",
        "best_checkpoint",
        "train_log.json",
        "eval_report.json",
        "sweep.csv",
        "test_histogram_sim.csv",
        "test_histogram_norm_hat.csv",
        os.path.join("metrics", "epoch_metrics.csv"),
    ):
        assert os.path.exists(os.path.join(output_dir, name)), name

    assert TrainLog.load(os.path.join(output_dir, "train_log.json")) == result.train_log
    df = pd.read_csv(os.path.join(output_dir, "metrics", "epoch_metrics.csv"))
    assert df["epoch"].tolist() == [0, 1]


def test_checkpoint_matches_trained_model(full_run):
    config, result = full_run
    restored = load_checkpoint(os.path.join(config.output_dir, "checkpoint"))

    assert restored.parameter_names == result.model.parameter_names
    for name in result.model.parameter_names:
        assert (restored.parameters[name].data == result.model.parameters[name].data).all()


def test_evaluation_and_diagnostics(full_run):
    _, result = full_run

    assert result.evaluation is not None
    assert result.evaluation.report.split == "test"
    assert 0.0 <= result.train_log.sim_mass_above_half_init <= 1.0
    assert 0.0 <= result.train_log.sim_mass_above_half_final <= 1.0
    assert result.train_log.best_epoch in (0, 1)


def test_training_is_deterministic(tmp_path, small_dataset_config, small_dataset, full_run):
    _, first = full_run
    config = run_config(tmp_path / "again", small_dataset_config)
    second = Trainer(config, small_dataset).run()

    assert second.train_log.to_json() == first.train_log.to_json()


def test_vanilla_mode_trains_on_cross_entropy_only(tmp_path, small_dataset_config, small_dataset):
    config = run_config(tmp_path / "vanilla", small_dataset_config, mode="vanilla")
    result = Trainer(config, small_dataset).run()

    for record in result.train_log.records:
        assert record.l_sim == 0.0
        assert record.l_norm == 0.0
        assert record.l_drop == 0.0
        assert record.l_ce > 0.0


def test_zero_epochs_still_saves(tmp_path, small_dataset_config, small_dataset):
    config = run_config(tmp_path / "none", small_dataset_config)
    config.epochs = 0
    result = Trainer(config, small_dataset).run()

    assert result.train_log.records == []
    assert os.path.exists(os.path.join(config.output_dir, "checkpoint"))


def test_zero_initialized_head_trains_on_total_objective(
    tmp_path, small_dataset_config, small_dataset
):
    config = run_config(tmp_path / "zero_head", small_dataset_config)
    config.epochs = 1
    config.model_config.zero_init_head = True
    config.loss_weights_config.warm_epochs = 0
    result = Trainer(config, small_dataset).run()

    (record,) = result.train_log.records
    assert record.stage == StageType.TOTAL
    # every class row starts at zero, so the alignment terms vanish on the first step
    assert result.train_log.sim_mass_above_half_init == 0.0
    assert 0.0 <= result.train_log.sim_mass_above_half_final <= 1.0
    assert result.evaluation is not None
