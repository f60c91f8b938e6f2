from dataclasses import dataclass
from typing import Dict, List

import pandas as pd


@dataclass(frozen=True)
class SweepCurve:
    thresholds: List[float]
    accuracy_per_iou: Dict[float, List[float]]

    def best(self, delta: float) -> float:
        return max(self.accuracy_per_iou[delta])

    def to_df(self) -> pd.DataFrame:
        columns = {"tau": self.thresholds}
        for delta, accuracies in self.accuracy_per_iou.items():
            columns[f"acc@{delta:g}"] = accuracies
        return pd.DataFrame(columns)
