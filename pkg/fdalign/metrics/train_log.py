import json
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from fdalign.errors import DataError
from fdalign.metrics.constants import EpochMetrics
from fdalign.types import StageType


@dataclass(frozen=True)
class EpochRecord:
    epoch: int
    stage: StageType
    l_ce: float
    l_sim: float
    l_norm: float
    l_drop: float
    train_acc: float
    val_gt_loc: float

    def metrics(self) -> Dict[EpochMetrics, float]:
        return {
            EpochMetrics.L_CE: self.l_ce,
            EpochMetrics.L_SIM: self.l_sim,
            EpochMetrics.L_NORM: self.l_norm,
            EpochMetrics.L_DROP: self.l_drop,
            EpochMetrics.TRAIN_ACC: self.train_acc,
            EpochMetrics.VAL_GT_LOC: self.val_gt_loc,
        }

    def to_dict(self) -> Dict[str, Any]:
        result = {"epoch": self.epoch, "stage": str(self.stage)}
        result.update({metric.value: value for metric, value in self.metrics().items()})
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EpochRecord":
        return cls(
            epoch=data["epoch"],
            stage=StageType.from_str(data["stage"]),
            l_ce=data[EpochMetrics.L_CE.value],
            l_sim=data[EpochMetrics.L_SIM.value],
            l_norm=data[EpochMetrics.L_NORM.value],
            l_drop=data[EpochMetrics.L_DROP.value],
            train_acc=data[EpochMetrics.TRAIN_ACC.value],
            val_gt_loc=data[EpochMetrics.VAL_GT_LOC.value],
        )


@dataclass
class TrainLog:
    """Per-epoch training record plus end-of-run diagnostics.

    Serialization carries no timestamps or paths, so identical runs give
    byte-identical files.
    """

    warm_epochs: int
    records: List[EpochRecord] = field(default_factory=list)
    best_epoch: Optional[int] = None
    best_val_gt_loc: Optional[float] = None
    sim_mass_above_half_init: Optional[float] = None
    sim_mass_above_half_final: Optional[float] = None

    def append(self, record: EpochRecord) -> None:
        expected = StageType.WARM if record.epoch < self.warm_epochs else StageType.TOTAL
        if record.stage != expected:
            raise ValueError(
                f"epoch {record.epoch} logged as {record.stage}, expected {expected}"
            )
        self.records.append(record)
        if self.best_val_gt_loc is None or record.val_gt_loc > self.best_val_gt_loc:
            self.best_epoch = record.epoch
            self.best_val_gt_loc = record.val_gt_loc

    def to_dict(self) -> Dict[str, Any]:
        return {
            "warm_epochs": self.warm_epochs,
            "records": [record.to_dict() for record in self.records],
            "best_epoch": self.best_epoch,
            "best_val_gt_loc": self.best_val_gt_loc,
            "in_box_sim_mass_above_0.5": {
                "init": self.sim_mass_above_half_init,
                "final": self.sim_mass_above_half_final,
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def write(self, path: str) -> None:
        with open(path, "w") as f:
            f.write(self.to_json())

    @classmethod
    def load(cls, path: str) -> "TrainLog":
        try:
            with open(path) as f:
                data = json.load(f)
            mass = data["in_box_sim_mass_above_0.5"]
            return cls(
                warm_epochs=data["warm_epochs"],
                records=[EpochRecord.from_dict(record) for record in data["records"]],
                best_epoch=data["best_epoch"],
                best_val_gt_loc=data["best_val_gt_loc"],
                sim_mass_above_half_init=mass["init"],
                sim_mass_above_half_final=mass["final"],
            )
        except (OSError, ValueError, KeyError) as e:
            raise DataError(f"{path}: unreadable train log ({e})")
