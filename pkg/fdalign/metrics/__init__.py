from fdalign.metrics.constants import EpochMetrics
from fdalign.metrics.data_series import DataSeries
from fdalign.metrics.metrics_store import (
    MetricsStore,
    save_eval_report,
    save_evaluation,
    save_histograms,
    save_sweep,
)
from fdalign.metrics.train_log import EpochRecord, TrainLog

__all__ = [
    DataSeries,
    EpochMetrics,
    EpochRecord,
    MetricsStore,
    TrainLog,
    save_eval_report,
    save_evaluation,
    save_histograms,
    save_sweep,
]
