import json
import os
from argparse import SUPPRESS, ArgumentParser

import numpy as np
from PIL import Image

from fdalign.cam import decompose
from fdalign.commands.base_command import BaseCommand
from fdalign.entities import DecompositionMaps
from fdalign.errors import InvalidArgumentError
from fdalign.logger import init_logger
from fdalign.tensor import write_ften
from fdalign.types import CommandType

logger = init_logger(__name__)


def to_gray(values: np.ndarray, low: float, high: float) -> np.ndarray:
    """Affine map of [low, high] onto 0..255."""
    if high <= low:
        return np.zeros(values.shape, dtype=np.uint8)
    scaled = (np.clip(values, low, high) - low) / (high - low)
    return np.round(scaled * 255).astype(np.uint8)


def dump_maps(decomp: DecompositionMaps, directory: str) -> None:
    os.makedirs(directory, exist_ok=True)
    maps = {
        "norm_map": (decomp.norm_map, decomp.norm_map.min(), decomp.norm_map.max()),
        "sim_map": (decomp.sim_map, -1.0, 1.0),
        "norm_hat": (decomp.norm_hat, 0.0, 1.0),
        "cam": (decomp.cam, decomp.cam.min(), decomp.cam.max()),
    }
    for name, (values, low, high) in maps.items():
        write_ften(os.path.join(directory, f"{name}.ften"), values)
        Image.fromarray(to_gray(values, low, high)).save(
            os.path.join(directory, f"{name}.pgm"), format="PPM"
        )


class DecomposeCommand(BaseCommand):
    help = "Dump the norm, similarity, normalized norm and CAM maps of one image."

    @staticmethod
    def get_type() -> CommandType:
        return CommandType.DECOMPOSE

    @classmethod
    def add_arguments(cls, parser: ArgumentParser) -> None:
        parser.add_argument(
            "--checkpoint",
            dest="checkpoint_dir",
            default=SUPPRESS,
            help="Checkpoint directory; defaults to <output_dir>/checkpoint.",
        )
        parser.add_argument(
            "--image", type=int, default=0, help="Sample index within the eval split."
        )
        parser.add_argument(
            "--class",
            dest="class_index",
            type=int,
            help="Class whose maps are dumped; defaults to the ground-truth label.",
        )

    def run(self) -> int:
        dataset = self._load_dataset()
        model = self._load_model_for(dataset)
        split = self._config.eval_config.split_type
        samples = dataset.split(split)
        if not 0 <= self._args.image < len(samples):
            raise InvalidArgumentError(
                f"image index {self._args.image} outside the {len(samples)} {split} samples"
            )
        sample = samples[self._args.image]

        class_index = self._args.class_index
        if class_index is None:
            class_index = sample.label
        if not 0 <= class_index < model.config.num_classes:
            raise InvalidArgumentError(
                f"class index {class_index} outside [0, {model.config.num_classes})"
            )

        f_map = model.forward(sample.chw[None]).f_map.data[0]
        decomp = decompose(f_map, model.head_weight.data[class_index], class_index)

        directory = os.path.join(
            self._config.output_dir, "decompose", f"{sample.name}_c{class_index}"
        )
        dump_maps(decomp, directory)
        with open(os.path.join(directory, "meta.json"), "w") as f:
            json.dump(
                {
                    "sample": sample.name,
                    "label": sample.label,
                    "class_index": class_index,
                    "weight_norm": decomp.weight_norm,
                },
                f,
                indent=2,
                sort_keys=True,
            )
        logger.info(f"Decomposition of {sample.name} for class {class_index} in {directory}")
        return 0
