import os
from typing import Dict, List, Tuple

import pandas as pd
import plotly_express as px
import wandb

from fdalign.logger import init_logger

logger = init_logger(__name__)


class DataSeries:
    """(x, y) points of one metric, e.g. a training loss per epoch."""

    def __init__(self, x_name: str, y_name: str) -> None:
        self._points: List[Tuple[float, float]] = []
        self._x_name = x_name
        self._y_name = y_name

    def __len__(self):
        return len(self._points)

    @property
    def metric_name(self) -> str:
        return self._y_name

    def put(self, data_x: float, data_y: float) -> None:
        self._points.append((data_x, data_y))

    def to_df(self) -> pd.DataFrame:
        return pd.DataFrame(self._points, columns=[self._x_name, self._y_name])

    def summary(self) -> Dict[str, float]:
        values = self.to_df()[self._y_name]
        return {"min": values.min(), "max": values.max(), "last": values.iloc[-1]}

    def log_summary(self) -> None:
        if not self._points:
            return
        summary = self.summary()
        logger.debug(
            f"{self._y_name}: min {summary['min']:.4f}, max {summary['max']:.4f},"
            f" last {summary['last']:.4f}"
        )
        if wandb.run:
            for key, value in summary.items():
                wandb.summary[f"{self._y_name}_{key}"] = value

    def plot_line(self, path: str) -> None:
        if not self._points:
            return
        fig = px.line(self.to_df(), x=self._x_name, y=self._y_name, markers=True)
        fig.update_traces(marker=dict(size=4))
        fig.write_image(os.path.join(path, f"{self._y_name}.png"))
