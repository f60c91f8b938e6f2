import json

import pandas as pd
import pytest

from fdalign.config import MetricsConfig, RunConfig
from fdalign.entities import EvalReport, SweepCurve
from fdalign.errors import DataError
from fdalign.metrics import EpochRecord, MetricsStore, TrainLog, save_eval_report, save_sweep
from fdalign.types import StageType


def record(epoch, stage, val_gt_loc=0.5):
    return EpochRecord(
        epoch=epoch,
        stage=stage,
        l_ce=1.0 / (epoch + 1),
        l_sim=0.0 if stage == StageType.WARM else -0.2,
        l_norm=0.0 if stage == StageType.WARM else -0.1,
        l_drop=0.3,
        train_acc=0.25 * epoch,
        val_gt_loc=val_gt_loc,
    )


def test_stage_must_follow_warm_epochs():
    log = TrainLog(warm_epochs=2)
    log.append(record(0, StageType.WARM))

    with pytest.raises(ValueError):
        log.append(record(1, StageType.TOTAL))
    with pytest.raises(ValueError):
        TrainLog(warm_epochs=0).append(record(0, StageType.WARM))


def test_best_epoch_keeps_first_maximum():
    log = TrainLog(warm_epochs=1)
    log.append(record(0, StageType.WARM, 0.2))
    log.append(record(1, StageType.TOTAL, 0.6))
    log.append(record(2, StageType.TOTAL, 0.6))
    log.append(record(3, StageType.TOTAL, 0.4))

    assert log.best_epoch == 1
    assert log.best_val_gt_loc == 0.6


def test_json_round_trip(tmp_path):
    log = TrainLog(warm_epochs=1)
    log.append(record(0, StageType.WARM, 0.1))
    log.append(record(1, StageType.TOTAL, 0.3))
    log.sim_mass_above_half_init = 0.1
    log.sim_mass_above_half_final = 0.4
    path = tmp_path / "train_log.json"
    log.write(str(path))

    loaded = TrainLog.load(str(path))

    assert loaded == log
    assert loaded.to_json() == path.read_text()
    data = json.loads(path.read_text())
    assert [entry["stage"] for entry in data["records"]] == ["warm", "total"]


def test_load_rejects_broken_file(tmp_path):
    path = tmp_path / "train_log.json"
    path.write_text("{")

    with pytest.raises(DataError):
        TrainLog.load(str(path))
    with pytest.raises(DataError):
        TrainLog.load(str(tmp_path / "missing.json"))


def test_save_sweep_columns(tmp_path):
    curve = SweepCurve(
        thresholds=[0.0, 0.5, 1.0],
        accuracy_per_iou={0.3: [1.0, 0.5, 0.0], 0.5: [0.5, 0.5, 0.0]},
    )
    path = save_sweep(curve, str(tmp_path))
    df = pd.read_csv(path)

    assert list(df.columns) == ["tau", "acc@0.3", "acc@0.5"]
    assert df["acc@0.3"].tolist() == [1.0, 0.5, 0.0]
    assert curve.best(0.5) == 0.5


def test_save_eval_report(tmp_path):
    report = EvalReport(
        top1_loc=0.4,
        top5_loc=None,
        gt_loc=0.5,
        maxboxaccv2_per_delta={"0.3": 0.9, "0.5": 0.6, "0.7": 0.3},
        maxboxaccv2_mean=0.6,
        pxap=0.7,
        top1_cls=0.8,
        top5_cls=None,
        box_threshold=0.2,
        map_source="cam",
        split="test",
        num_images=10,
        mean_in_mask_similarity=0.1,
    )
    path = save_eval_report(report, str(tmp_path / "eval"))

    with open(path) as f:
        assert json.load(f) == report.to_dict()


def test_metrics_store_writes_epoch_csv(tmp_path):
    config = RunConfig(output_dir=str(tmp_path))
    store = MetricsStore(config)
    store.on_epoch_end(record(0, StageType.WARM))
    store.on_epoch_end(record(1, StageType.TOTAL))
    store.store_epoch_metrics()
    store.finish()

    df = pd.read_csv(tmp_path / "metrics" / "epoch_metrics.csv")
    assert df["epoch"].tolist() == [0, 1]
    assert df["L_sim"].tolist() == [0.0, -0.2]


def test_metrics_store_respects_write_flag(tmp_path):
    config = RunConfig(
        output_dir=str(tmp_path), metrics_config=MetricsConfig(write_metrics=False)
    )
    store = MetricsStore(config)
    store.on_epoch_end(record(0, StageType.WARM))
    store.store_epoch_metrics()

    assert not (tmp_path / "metrics").exists()
