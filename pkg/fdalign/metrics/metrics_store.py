import json
import os
from functools import reduce
from typing import Dict, List

import pandas as pd
import plotly_express as px
import wandb

from fdalign.config import RunConfig
from fdalign.entities import EvalReport, SweepCurve
from fdalign.evaluation import EvaluationResult, RegionHistograms
from fdalign.logger import init_logger
from fdalign.metrics.constants import ACCURACY_STR, EPOCH_STR, TAU_STR, EpochMetrics
from fdalign.metrics.data_series import DataSeries
from fdalign.metrics.train_log import EpochRecord

logger = init_logger(__name__)

SWEEP_FILE_NAME = "sweep.csv"
EVAL_REPORT_FILE_NAME = "eval_report.json"


def if_write_metrics(func):
    def wrapper(self, *args, **kwargs):
        if self._config.write_metrics:
            return func(self, *args, **kwargs)

    return wrapper


def save_sweep(curve: SweepCurve, base_path: str, store_plot: bool = False) -> str:
    os.makedirs(base_path, exist_ok=True)
    df = curve.to_df()
    path = os.path.join(base_path, SWEEP_FILE_NAME)
    df.to_csv(path, index=False)

    if store_plot:
        long_df = df.melt(id_vars=[TAU_STR], var_name="iou", value_name=ACCURACY_STR)
        fig = px.line(long_df, x=TAU_STR, y=ACCURACY_STR, color="iou", markers=True)
        fig.write_image(os.path.join(base_path, "sweep.png"))
    return path


def save_histograms(
    histograms: RegionHistograms, base_path: str, prefix: str, store_plot: bool = False
) -> None:
    os.makedirs(base_path, exist_ok=True)
    for name, df in (("sim", histograms.sim_df()), ("norm_hat", histograms.norm_df())):
        file_name = f"{prefix}_histogram_{name}"
        df.to_csv(os.path.join(base_path, f"{file_name}.csv"), index=False)
        if store_plot:
            fig = px.bar(df, x="bin_low", y="count", title=file_name)
            fig.write_image(os.path.join(base_path, f"{file_name}.png"))


def save_eval_report(report: EvalReport, base_path: str) -> str:
    os.makedirs(base_path, exist_ok=True)
    path = os.path.join(base_path, EVAL_REPORT_FILE_NAME)
    with open(path, "w") as f:
        json.dump(report.to_dict(), f, indent=2, sort_keys=True)
    return path


def save_evaluation(
    result: EvaluationResult, base_path: str, store_plots: bool = False
) -> None:
    """Report JSON, sweep CSV and in-box histogram CSVs of one evaluation."""
    save_eval_report(result.report, base_path)
    save_sweep(result.sweep, base_path, store_plots)
    save_histograms(result.histograms, base_path, result.report.split, store_plots)


class MetricsStore:
    """Per-epoch series of one run, mirrored to wandb when configured."""

    def __init__(self, run_config: RunConfig) -> None:
        self._run_config = run_config
        self._config = run_config.metrics_config

        self._epoch_metrics: Dict[EpochMetrics, DataSeries] = {}
        for metric_name in EpochMetrics:
            self._epoch_metrics[metric_name] = DataSeries(EPOCH_STR, metric_name.value)

        self._init_wandb()

    def _init_wandb(self):
        if (
            not self._config.write_metrics
            or not self._config.wandb_project
            or not self._config.wandb_group
        ):
            return

        wandb.init(
            project=self._config.wandb_project,
            group=self._config.wandb_group,
            name=self._config.wandb_run_name,
            config=self._run_config.to_dict(),
        )

    @property
    def base_path(self) -> str:
        return os.path.join(self._run_config.output_dir, "metrics")

    @if_write_metrics
    def on_epoch_end(self, record: EpochRecord) -> None:
        for metric_name, value in record.metrics().items():
            self._epoch_metrics[metric_name].put(record.epoch, value)

        if wandb.run:
            wandb.log(
                {metric.value: value for metric, value in record.metrics().items()},
                step=record.epoch,
            )

    def _save_as_csv(
        self,
        dataseries_list: List[DataSeries],
        key_to_join: str,
        base_path: str,
        file_name: str,
    ):
        os.makedirs(base_path, exist_ok=True)

        merged_df = reduce(
            lambda left, right: pd.merge(left, right, on=[key_to_join], how="outer"),
            [dataseries.to_df() for dataseries in dataseries_list],
        )
        merged_df.to_csv(os.path.join(base_path, f"{file_name}.csv"), index=False)
        if wandb.run and self._config.save_table_to_wandb:
            wandb.log({f"{file_name}_table": wandb.Table(dataframe=merged_df)})

    @if_write_metrics
    def store_epoch_metrics(self) -> None:
        if not len(self._epoch_metrics[EpochMetrics.L_CE]):
            return
        self._save_as_csv(
            list(self._epoch_metrics.values()), EPOCH_STR, self.base_path, "epoch_metrics"
        )
        for dataseries in self._epoch_metrics.values():
            dataseries.log_summary()
            if self._config.store_plots:
                dataseries.plot_line(self.base_path)

    @if_write_metrics
    def store_eval_report(self, report: EvalReport) -> None:
        if not wandb.run:
            return
        for key, value in report.to_dict().items():
            if isinstance(value, (int, float)):
                wandb.summary[f"eval_{key}"] = value

    def finish(self) -> None:
        if wandb.run:
            wandb.finish()
