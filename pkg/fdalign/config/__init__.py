from fdalign.config.config import (
    DatasetConfig,
    EvalConfig,
    GradCheckConfig,
    LossWeightsConfig,
    MetricsConfig,
    ModelConfig,
    OptimizerConfig,
    RunConfig,
)

__all__ = [
    DatasetConfig,
    EvalConfig,
    GradCheckConfig,
    LossWeightsConfig,
    MetricsConfig,
    ModelConfig,
    OptimizerConfig,
    RunConfig,
]
