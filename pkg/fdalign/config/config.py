import json
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional

from fdalign.config.flat_dataclass import create_flat_dataclass
from fdalign.config.presets import LOSS_WEIGHT_PRESETS, OPTIMIZER_PRESETS
from fdalign.config.utils import dataclass_from_dict, dataclass_to_dict
from fdalign.errors import ConfigError
from fdalign.logger import init_logger
from fdalign.types import (
    BodyShapeType,
    DropLossReductionType,
    MapSourceType,
    SplitType,
    TrainingModeType,
)
from fdalign.utils.file_lock import exclusive_dir

logger = init_logger(__name__)


@dataclass
class DatasetConfig:
    num_classes: int = field(
        default=8,
        metadata={"help": "Number of classes (one marker glyph per class)."},
    )
    train_per_class: int = field(
        default=400,
        metadata={"help": "Training images per class."},
    )
    val_per_class: int = field(
        default=80,
        metadata={"help": "Validation images per class."},
    )
    test_per_class: int = field(
        default=120,
        metadata={"help": "Test images per class."},
    )
    image_size: int = field(
        default=64,
        metadata={"help": "Side length of the square images in pixels."},
    )
    body_shapes: List[str] = field(
        default_factory=lambda: ["ellipse", "rectangle", "triangle"],
        metadata={"help": "Body shapes drawn uniformly for every object."},
    )
    marker_size: int = field(
        default=5,
        metadata={"help": "Side length of the class marker glyph in pixels."},
    )
    noise_level: float = field(
        default=0.05,
        metadata={"help": "Standard deviation of the per-pixel noise."},
    )
    multi_object: bool = field(
        default=False,
        metadata={"help": "Place up to max_objects objects of the class per image."},
    )
    max_objects: int = field(
        default=3,
        metadata={"help": "Upper bound on objects per image in multi-object mode."},
    )
    placement_retries: int = field(
        default=200,
        metadata={"help": "Placement attempts per object before giving up."},
    )

    def __post_init__(self):
        if self.num_classes < 1:
            raise ConfigError(f"num_classes must be >= 1, got {self.num_classes}")
        for name in ("train_per_class", "val_per_class", "test_per_class"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.image_size < 16:
            raise ConfigError(f"image_size must be >= 16, got {self.image_size}")
        if not self.body_shapes:
            raise ConfigError("body_shapes must not be empty")
        for shape in self.body_shapes:
            BodyShapeType.from_str(shape)
        if self.marker_size < 3:
            raise ConfigError(f"marker_size must be >= 3, got {self.marker_size}")
        if self.marker_size**2 > 0.04 * self.image_size**2:
            raise ConfigError(
                f"marker_size {self.marker_size} covers more than 4 percent of the image"
            )
        if self.noise_level < 0:
            raise ConfigError(f"noise_level must be >= 0, got {self.noise_level}")
        if self.max_objects < 1:
            raise ConfigError(f"max_objects must be >= 1, got {self.max_objects}")
        if self.placement_retries < 1:
            raise ConfigError("placement_retries must be >= 1")

    def images_per_split(self) -> Dict[SplitType, int]:
        return {
            SplitType.TRAIN: self.train_per_class,
            SplitType.VAL: self.val_per_class,
            SplitType.TEST: self.test_per_class,
        }


@dataclass
class ModelConfig:
    input_channels: int = field(
        default=3,
        metadata={"help": "Channels of the input image."},
    )
    input_size: int = field(
        default=64,
        metadata={"help": "Side length of the square input image."},
    )
    conv_blocks: List[List[int]] = field(
        default_factory=lambda: [[16, 3, 2], [32, 3, 2], [32, 3, 2], [64, 3, 1]],
        metadata={"help": "Conv blocks as JSON list of [out_channels, kernel, stride]."},
    )
    drop_layer_index: int = field(
        default=2,
        metadata={"help": "Block whose output F' receives attentive dropout."},
    )
    num_classes: int = field(
        default=8,
        metadata={"help": "Number of classes C."},
    )
    feature_dim: int = field(
        default=64,
        metadata={"help": "Channels D of the final feature map."},
    )
    zero_init_head: bool = field(
        default=False,
        metadata={"help": "Initialize the classifier head with zeros."},
    )

    def __post_init__(self):
        if not self.conv_blocks:
            raise ConfigError("conv_blocks must not be empty")
        for block in self.conv_blocks:
            if len(block) != 3 or min(block) < 1:
                raise ConfigError(
                    f"conv block {block} must be [out_channels, kernel, stride] >= 1"
                )
        if not 0 <= self.drop_layer_index < len(self.conv_blocks) - 1:
            raise ConfigError(
                f"drop_layer_index {self.drop_layer_index} must name a block"
                f" before the last of {len(self.conv_blocks)}"
            )
        if self.feature_dim != self.conv_blocks[-1][0]:
            raise ConfigError(
                f"feature_dim {self.feature_dim} differs from the last block's"
                f" {self.conv_blocks[-1][0]} channels"
            )
        if self.num_classes < 1:
            raise ConfigError(f"num_classes must be >= 1, got {self.num_classes}")
        height, width = self.feature_size()
        if height < 2 or width < 2:
            raise ConfigError(
                f"final feature map {height}x{width} is smaller than 2x2"
            )

    def spatial_sizes(self) -> List[int]:
        """Spatial side length after every block."""
        sizes = []
        size = self.input_size
        for _, kernel, stride in self.conv_blocks:
            size = (size + 2 * (kernel // 2) - kernel) // stride + 1
            sizes.append(size)
        return sizes

    def feature_size(self):
        size = self.spatial_sizes()[-1]
        return size, size


@dataclass
class LossWeightsConfig:
    lambda_sim: float = field(
        default=0.5,
        metadata={"help": "Weight of the similarity loss."},
    )
    lambda_norm: float = field(
        default=0.15,
        metadata={"help": "Weight of the norm loss."},
    )
    lambda_drop: float = field(
        default=3.0,
        metadata={"help": "Weight of the attentive dropout consistency loss."},
    )
    tau_fg: float = field(
        default=0.6,
        metadata={"help": "Normalized-norm threshold of the foreground region."},
    )
    tau_bg: float = field(
        default=0.1,
        metadata={"help": "Normalized-norm threshold of the background region."},
    )
    gamma: float = field(
        default=0.8,
        metadata={"help": "Attentive threshold relative to the channel-mean maximum."},
    )
    p: float = field(
        default=0.5,
        metadata={"help": "Drop probability of an attentive location."},
    )
    warm_epochs: int = field(
        default=6,
        metadata={"help": "Epochs trained with cross-entropy and drop loss only."},
    )
    finegrained: bool = field(
        default=False,
        metadata={"help": "Background = non-positive similarity with every class."},
    )
    drop_loss_reduction: str = field(
        default="mean",
        metadata={"help": "Reduction of the drop loss: mean or sum."},
    )
    preset: Optional[str] = field(
        default=None,
        metadata={"help": f"Hyperparameter preset: {sorted(LOSS_WEIGHT_PRESETS)}."},
    )

    def __post_init__(self):
        if self.preset is not None:
            if self.preset not in LOSS_WEIGHT_PRESETS:
                raise ConfigError(
                    f"unknown preset '{self.preset}',"
                    f" expected one of {sorted(LOSS_WEIGHT_PRESETS)}"
                )
            for key, value in LOSS_WEIGHT_PRESETS[self.preset].items():
                setattr(self, key, value)

        for name in ("lambda_sim", "lambda_norm", "lambda_drop"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0, got {getattr(self, name)}")
        if not 0 <= self.tau_bg < self.tau_fg <= 1:
            raise ConfigError(
                f"need 0 <= tau_bg < tau_fg <= 1, got tau_bg={self.tau_bg},"
                f" tau_fg={self.tau_fg}"
            )
        if not 0 < self.gamma <= 1:
            raise ConfigError(f"gamma must be in (0, 1], got {self.gamma}")
        if not 0 <= self.p <= 1:
            raise ConfigError(f"p must be in [0, 1], got {self.p}")
        if self.warm_epochs < 0:
            raise ConfigError(f"warm_epochs must be >= 0, got {self.warm_epochs}")
        DropLossReductionType.from_str(self.drop_loss_reduction)

    @property
    def drop_loss_reduction_type(self) -> DropLossReductionType:
        return DropLossReductionType.from_str(self.drop_loss_reduction)


@dataclass
class OptimizerConfig:
    lr_former: float = field(
        default=0.02,
        metadata={"help": "Learning rate of blocks up to the drop layer."},
    )
    lr_latter: float = field(
        default=0.02,
        metadata={"help": "Learning rate of the remaining blocks and the head."},
    )
    momentum: float = field(
        default=0.9,
        metadata={"help": "SGD momentum."},
    )
    weight_decay: float = field(
        default=5e-4,
        metadata={"help": "Weight decay coupled into the gradient."},
    )
    preset: Optional[str] = field(
        default=None,
        metadata={"help": f"Learning-rate preset: {sorted(OPTIMIZER_PRESETS)}."},
    )

    def __post_init__(self):
        if self.preset is not None:
            if self.preset not in OPTIMIZER_PRESETS:
                raise ConfigError(
                    f"unknown preset '{self.preset}',"
                    f" expected one of {sorted(OPTIMIZER_PRESETS)}"
                )
            for key, value in OPTIMIZER_PRESETS[self.preset].items():
                setattr(self, key, value)
        if self.lr_former < 0 or self.lr_latter < 0:
            raise ConfigError("learning rates must be >= 0")
        if not 0 <= self.momentum < 1:
            raise ConfigError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.weight_decay < 0:
            raise ConfigError(f"weight_decay must be >= 0, got {self.weight_decay}")


@dataclass
class EvalConfig:
    tau_grid_size: int = field(
        default=101,
        metadata={"help": "Number of evenly spaced box thresholds in [0, 1]."},
    )
    deltas: List[float] = field(
        default_factory=lambda: [0.3, 0.5, 0.7],
        metadata={"help": "IoU thresholds of MaxBoxAccV2."},
    )
    connectivity: int = field(
        default=8,
        metadata={"help": "Pixel connectivity of box components: 4 or 8."},
    )
    iou_threshold: float = field(
        default=0.5,
        metadata={"help": "IoU threshold of Top-k Loc and GT Loc."},
    )
    box_threshold: Optional[float] = field(
        default=None,
        metadata={"help": "Fixed tau for Top-k/GT Loc; unset picks the best tau."},
    )
    validation_tau_grid_size: int = field(
        default=21,
        metadata={"help": "Threshold grid size of the per-epoch validation."},
    )
    histogram_bins: int = field(
        default=20,
        metadata={"help": "Bins of the in-box similarity and norm histograms."},
    )
    map_source: str = field(
        default="cam",
        metadata={"help": "Localization map: cam, norm or sim."},
    )
    compute_pxap: bool = field(
        default=True,
        metadata={"help": "Compute pixel average precision against the masks."},
    )
    split: str = field(
        default="test",
        metadata={"help": "Dataset split to evaluate: train, val or test."},
    )

    def __post_init__(self):
        if self.tau_grid_size < 1 or self.validation_tau_grid_size < 1:
            raise ConfigError("threshold grid sizes must be >= 1")
        if not self.deltas or any(not 0 < d <= 1 for d in self.deltas):
            raise ConfigError(f"deltas must be non-empty and in (0, 1], got {self.deltas}")
        if self.connectivity not in (4, 8):
            raise ConfigError(f"connectivity must be 4 or 8, got {self.connectivity}")
        if not 0 < self.iou_threshold <= 1:
            raise ConfigError(f"iou_threshold must be in (0, 1], got {self.iou_threshold}")
        if self.box_threshold is not None and not 0 <= self.box_threshold <= 1:
            raise ConfigError(f"box_threshold must be in [0, 1], got {self.box_threshold}")
        if self.histogram_bins < 1:
            raise ConfigError("histogram_bins must be >= 1")
        MapSourceType.from_str(self.map_source)
        SplitType.from_str(self.split)

    @property
    def map_source_type(self) -> MapSourceType:
        return MapSourceType.from_str(self.map_source)

    @property
    def split_type(self) -> SplitType:
        return SplitType.from_str(self.split)


@dataclass
class GradCheckConfig:
    eps: float = field(
        default=1e-5,
        metadata={"help": "Central difference step."},
    )
    tol: float = field(
        default=1e-6,
        metadata={"help": "Maximum accepted relative error."},
    )
    denominator_floor: float = field(
        default=1e-3,
        metadata={"help": "Lower bound of the relative error denominator."},
    )
    inject_gradient_bug: bool = field(
        default=False,
        metadata={"help": "Scale tape gradients by 1.01 (negative control)."},
    )

    def __post_init__(self):
        if self.eps <= 0:
            raise ConfigError(f"eps must be > 0, got {self.eps}")
        if self.tol <= 0:
            raise ConfigError(f"tol must be > 0, got {self.tol}")


@dataclass
class MetricsConfig:
    """Metric configuration."""

    write_metrics: bool = field(
        default=True,
        metadata={"help": "Whether to write metric CSV files."},
    )
    store_plots: bool = field(
        default=False,
        metadata={"help": "Whether to store plots (needs kaleido)."},
    )
    save_table_to_wandb: bool = field(
        default=False,
        metadata={"help": "Whether to save tables to wandb."},
    )
    wandb_project: Optional[str] = field(
        default=None,
        metadata={"help": "Weights & Biases project name."},
    )
    wandb_group: Optional[str] = field(
        default=None,
        metadata={"help": "Weights & Biases group name."},
    )
    wandb_run_name: Optional[str] = field(
        default=None,
        metadata={"help": "Weights & Biases run name."},
    )


@dataclass
class RunConfig:
    seed: int = field(
        default=42,
        metadata={"help": "Seed of every random stream of the run."},
    )
    log_level: str = field(
        default="info",
        metadata={"help": "Logging level."},
    )
    mode: str = field(
        default="full",
        metadata={"help": "Training mode: full or vanilla (cross-entropy only)."},
    )
    epochs: int = field(
        default=60,
        metadata={"help": "Training epochs."},
    )
    batch_size: int = field(
        default=16,
        metadata={"help": "Training batch size."},
    )
    dataset_dir: str = field(
        default="data/synthetic",
        metadata={"help": "Dataset directory."},
    )
    output_dir: str = field(
        default="runs/default",
        metadata={"help": "Output directory of the run."},
    )
    checkpoint_dir: Optional[str] = field(
        default=None,
        metadata={"help": "Checkpoint to evaluate; defaults to <output_dir>/checkpoint."},
    )
    dataset_config: DatasetConfig = field(
        default_factory=DatasetConfig,
        metadata={"help": "Dataset config."},
    )
    model_config: ModelConfig = field(
        default_factory=ModelConfig,
        metadata={"help": "Model config."},
    )
    loss_weights_config: LossWeightsConfig = field(
        default_factory=LossWeightsConfig,
        metadata={"help": "Loss weights config."},
    )
    optimizer_config: OptimizerConfig = field(
        default_factory=OptimizerConfig,
        metadata={"help": "Optimizer config."},
    )
    eval_config: EvalConfig = field(
        default_factory=EvalConfig,
        metadata={"help": "Evaluation config."},
    )
    grad_check_config: GradCheckConfig = field(
        default_factory=GradCheckConfig,
        metadata={"help": "Gradient check config."},
    )
    metrics_config: MetricsConfig = field(
        default_factory=MetricsConfig,
        metadata={"help": "Metrics config."},
    )

    def __post_init__(self):
        TrainingModeType.from_str(self.mode)
        if self.log_level.upper() not in ("DEBUG", "INFO", "WARNING", "ERROR"):
            raise ConfigError(f"invalid log_level '{self.log_level}'")
        if self.epochs < 0:
            raise ConfigError(f"epochs must be >= 0, got {self.epochs}")
        if self.batch_size < 1:
            raise ConfigError(f"batch_size must be >= 1, got {self.batch_size}")
        if self.seed < 0:
            raise ConfigError(f"seed must be >= 0, got {self.seed}")
        if self.dataset_config.num_classes != self.model_config.num_classes:
            raise ConfigError(
                f"dataset has {self.dataset_config.num_classes} classes but the"
                f" model head has {self.model_config.num_classes}"
            )
        if self.mode_type == TrainingModeType.VANILLA:
            self.loss_weights_config.lambda_sim = 0.0
            self.loss_weights_config.lambda_norm = 0.0
            self.loss_weights_config.lambda_drop = 0.0

    @property
    def mode_type(self) -> TrainingModeType:
        return TrainingModeType.from_str(self.mode)

    @property
    def resolved_checkpoint_dir(self) -> str:
        return self.checkpoint_dir or os.path.join(self.output_dir, "checkpoint")

    def to_dict(self) -> Dict[str, Any]:
        return dataclass_to_dict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        try:
            return dataclass_from_dict(cls, data)
        except (KeyError, TypeError) as e:
            raise ConfigError(f"invalid config: {e}") from e

    @classmethod
    def load(cls, path: str) -> "RunConfig":
        try:
            with open(path) as f:
                data = json.load(f)
        except OSError as e:
            raise ConfigError(f"{path}: cannot read config ({e.strerror})") from e
        except json.JSONDecodeError as e:
            raise ConfigError(f"{path}: invalid JSON ({e})") from e
        return cls.from_dict(data)

    @classmethod
    def create_from_cli_args(
        cls, config_path: Optional[str], overrides: Dict[str, Any]
    ) -> "RunConfig":
        """Defaults, then the JSON file, then explicit flat CLI flags."""
        base = cls.load(config_path) if config_path else cls()
        flat_class = create_flat_dataclass(cls)
        flat_config = replace(flat_class.from_instance(base), **overrides)
        instance = flat_config.reconstruct_original_dataclass()
        logger.debug(f"Resolved config: {instance.to_dict()}")
        return instance

    def write_config_to_file(self) -> None:
        logger.info(f"Writing config to {self.output_dir}/config.json")
        with exclusive_dir(self.output_dir):
            with open(f"{self.output_dir}/config.json", "w") as f:
                json.dump(self.to_dict(), f, indent=4)
