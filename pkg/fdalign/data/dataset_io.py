import json
import os
from typing import Any, Dict, List

import numpy as np
from PIL import Image, UnidentifiedImageError

from fdalign.data.dataset import Dataset
from fdalign.data.dataset_spec import DatasetSpec
from fdalign.entities import Box, LocalizationSample
from fdalign.errors import DatasetError, DatasetExistsError
from fdalign.logger import init_logger
from fdalign.types import SplitType
from fdalign.utils.file_lock import exclusive_dir

logger = init_logger(__name__)

INDEX_FILE_NAME = "index.json"
IMAGES_DIR_NAME = "images"
MASKS_DIR_NAME = "masks"


def index_path(directory: str) -> str:
    return os.path.join(directory, INDEX_FILE_NAME)


def _record(sample: LocalizationSample) -> Dict[str, Any]:
    return {
        "file": f"{IMAGES_DIR_NAME}/{sample.name}.ppm",
        "mask_file": f"{MASKS_DIR_NAME}/{sample.name}.pgm",
        "label": sample.label,
        "boxes": [box.to_list() for box in sample.gt_boxes],
        "split": str(sample.split),
        "index": sample.index,
        "marker_box": sample.marker_box.to_list() if sample.marker_box else None,
    }


def save_dataset(dataset: Dataset, directory: str, force: bool = False) -> str:
    """Writes PPM images, PGM masks and index.json; returns the index path."""
    path = index_path(directory)
    if os.path.exists(path) and not force:
        raise DatasetExistsError(
            f"dataset already exists at {path}; pass --force to overwrite"
        )

    with exclusive_dir(directory):
        os.makedirs(os.path.join(directory, IMAGES_DIR_NAME), exist_ok=True)
        os.makedirs(os.path.join(directory, MASKS_DIR_NAME), exist_ok=True)

        records = []
        for sample in dataset:
            record = _record(sample)
            Image.fromarray(sample.pixels).save(
                os.path.join(directory, record["file"]), format="PPM"
            )
            mask = sample.gt_mask.astype(np.uint8) * 255
            Image.fromarray(mask).save(
                os.path.join(directory, record["mask_file"]), format="PPM"
            )
            records.append(record)

        with open(path, "w") as f:
            json.dump(
                {"dataset_spec": dataset.spec.to_dict(), "records": records},
                f,
                indent=2,
                sort_keys=True,
            )

    logger.info(f"Saved {len(records)} samples to {directory}")
    return path


def _read_image(path: str, mode: str) -> np.ndarray:
    try:
        with Image.open(path) as image:
            image.load()
            if image.mode != mode:
                raise DatasetError(f"{path}: expected mode {mode}, found {image.mode}")
            return np.array(image)
    except FileNotFoundError:
        raise DatasetError(f"{path}: file not found")
    except (OSError, UnidentifiedImageError, SyntaxError) as e:
        raise DatasetError(f"{path}: unreadable image ({e})")


def _load_sample(directory: str, record: Dict[str, Any], image_size: int) -> LocalizationSample:
    image_file = os.path.join(directory, record["file"])
    mask_file = os.path.join(directory, record["mask_file"])
    pixels = _read_image(image_file, "RGB")
    mask = _read_image(mask_file, "L") > 127
    if pixels.shape != (image_size, image_size, 3):
        raise DatasetError(f"{image_file}: unexpected size {pixels.shape}")
    if mask.shape != (image_size, image_size):
        raise DatasetError(f"{mask_file}: unexpected size {mask.shape}")

    marker_box = record.get("marker_box")
    return LocalizationSample(
        pixels=pixels,
        label=record["label"],
        gt_boxes=[Box.from_list(box) for box in record["boxes"]],
        gt_mask=mask,
        split=SplitType.from_str(record["split"]),
        index=record["index"],
        marker_box=Box.from_list(marker_box) if marker_box else None,
    )


def load_dataset(directory: str) -> Dataset:
    path = index_path(directory)
    if not os.path.exists(path):
        raise DatasetError(f"{path}: dataset index not found; run gen-data first")
    try:
        with open(path) as f:
            index = json.load(f)
        spec = DatasetSpec.from_dict(index["dataset_spec"])
        records: List[Dict[str, Any]] = index["records"]
    except (ValueError, KeyError, TypeError) as e:
        raise DatasetError(f"{path}: malformed index ({e})")

    splits = {split: [] for split in SplitType}
    for record in records:
        try:
            sample = _load_sample(directory, record, spec.image_size)
        except (KeyError, TypeError, ValueError) as e:
            raise DatasetError(f"{path}: malformed record {record!r} ({e})")
        splits[sample.split].append(sample)

    for split in SplitType:
        expected = spec.split_size(split)
        found = len(splits[split])
        if expected != found:
            raise DatasetError(
                f"{path}: index lists {found} {split} samples, dataset spec expects {expected}"
            )
        splits[split].sort(key=lambda sample: sample.index)

    logger.info(f"Loaded {len(records)} samples from {directory}")
    return Dataset(spec, splits)
