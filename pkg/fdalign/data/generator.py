from typing import List, Optional, Tuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from skimage.measure import label as label_components
from skimage.measure import regionprops
from skimage.morphology import binary_dilation
from skimage.transform import resize
from tqdm import tqdm

from fdalign.data.body_shape_registry import BodyShapeRegistry
from fdalign.data.dataset import Dataset
from fdalign.data.dataset_spec import DatasetSpec
from fdalign.data.markers import luminance, marker_color, marker_glyphs
from fdalign.entities import Box, LocalizationSample
from fdalign.errors import DatasetGenerationError
from fdalign.logger import init_logger
from fdalign.types import RngStreamType, SplitType
from fdalign.utils.random import make_rng

logger = init_logger(__name__)

_NOISE_GRID = 8
_MIN_CONTRAST = 0.25

# (body mask, marker top-left (x, y))
PlacedObject = Tuple[np.ndarray, Tuple[int, int]]


def boxes_from_mask(mask: np.ndarray) -> List[Box]:
    """Tight half-open box of every 8-connected component, in label order."""
    components = label_components(mask, connectivity=2)
    boxes = []
    for region in regionprops(components):
        min_row, min_col, max_row, max_col = region.bbox
        boxes.append(Box(min_col, min_row, max_col, max_row))
    return boxes


class SyntheticDatasetGenerator:
    """Images of class-agnostic bodies carrying a small class marker glyph.

    The marker is the only class cue while the body defines the object extent,
    so a classifier can succeed by looking at a small part of the object.
    """

    def __init__(self, spec: DatasetSpec, show_progress: bool = False) -> None:
        self._spec = spec
        self._glyphs = marker_glyphs(spec.num_classes, spec.marker_size)
        self._shapes = [
            BodyShapeRegistry.get_from_str(name) for name in spec.body_shapes
        ]
        self._show_progress = show_progress

    def generate(self) -> Dataset:
        splits = {}
        for split in SplitType:
            count = self._spec.split_size(split)
            indices = tqdm(
                range(count),
                desc=f"generating {split}",
                disable=not self._show_progress,
            )
            splits[split] = [self.generate_sample(split, index) for index in indices]
            logger.info(f"Generated {count} {split} samples")
        return Dataset(self._spec, splits)

    def generate_sample(self, split: SplitType, index: int) -> LocalizationSample:
        spec = self._spec
        rng = make_rng(spec.seed, RngStreamType.DATASET, int(split), index)
        label = index % spec.num_classes

        image = self._background(rng)
        num_objects = int(rng.integers(1, spec.max_objects + 1)) if spec.multi_object else 1
        objects = self._place_objects(rng, num_objects)

        mask = np.zeros((spec.image_size, spec.image_size), dtype=bool)
        marker_box = None
        size = spec.marker_size
        for body, (x, y) in objects:
            color = self._body_color(rng, image)
            image[body] = color
            glyph_region = image[y : y + size, x : x + size]
            glyph_region[self._glyphs[label]] = marker_color(float(luminance(color)))
            mask |= body
            if marker_box is None:
                marker_box = Box(x, y, x + size, y + size)

        image = image + rng.normal(0.0, spec.noise_level, image.shape)
        pixels = np.round(np.clip(image, 0.0, 1.0) * 255).astype(np.uint8)
        return LocalizationSample(
            pixels=pixels,
            label=label,
            gt_boxes=boxes_from_mask(mask),
            gt_mask=mask,
            split=split,
            index=index,
            marker_box=marker_box,
        )

    def _background(self, rng: np.random.Generator) -> np.ndarray:
        size = self._spec.image_size
        tint = rng.uniform(0.2, 0.8, 3)
        coarse = rng.normal(0.0, 0.12, (_NOISE_GRID, _NOISE_GRID, 3))
        low_frequency = resize(
            coarse, (size, size, 3), order=1, mode="edge", anti_aliasing=False
        )
        return np.clip(tint + low_frequency, 0.0, 1.0)

    def _body_color(self, rng: np.random.Generator, image: np.ndarray) -> np.ndarray:
        background = float(luminance(image.reshape(-1, 3).mean(axis=0)))
        for _ in range(100):
            color = rng.uniform(0.0, 1.0, 3)
            if abs(float(luminance(color)) - background) >= _MIN_CONTRAST:
                return color
        return np.full(3, 0.05 if background > 0.5 else 0.95)

    def _place_objects(
        self, rng: np.random.Generator, num_objects: int
    ) -> List[PlacedObject]:
        spec = self._spec
        low = spec.min_body_fraction + 0.02
        high = spec.max_body_fraction - 0.05
        if high < low:
            low = high = (spec.min_body_fraction + spec.max_body_fraction) / 2
        for _ in range(spec.placement_retries):
            target = rng.uniform(low, high)
            objects = self._try_place(rng, num_objects, target)
            if objects is not None:
                return objects
        field = "max_objects" if num_objects > 1 else "image_size"
        raise DatasetGenerationError(
            f"could not place {num_objects} bodies covering"
            f" {spec.min_body_fraction:.0%}-{spec.max_body_fraction:.0%} of a"
            f" {spec.image_size}x{spec.image_size} image with a"
            f" {spec.marker_size}px marker after {spec.placement_retries} attempts;"
            f" adjust dataset {field} or marker_size"
        )

    def _try_place(
        self, rng: np.random.Generator, num_objects: int, target: float
    ) -> Optional[List[PlacedObject]]:
        spec = self._spec
        size = spec.image_size
        occupied = np.zeros((size, size), dtype=bool)
        objects = []
        for _ in range(num_objects):
            shape = self._shapes[int(rng.integers(len(self._shapes)))]
            aspect = rng.uniform(0.75, 1.33)
            box_area = target / num_objects * size * size / shape.fill_ratio
            width = int(round(np.sqrt(box_area * aspect)))
            height = int(round(np.sqrt(box_area / aspect)))
            if max(width, height) > size - 2 or min(width, height) < spec.marker_size + 4:
                return None

            x0 = int(rng.integers(1, size - width))
            y0 = int(rng.integers(1, size - height))
            body = shape.rasterize(size, (x0, y0, x0 + width, y0 + height), rng)
            if (binary_dilation(body, np.ones((3, 3), dtype=bool)) & occupied).any():
                return None

            marker = self._marker_position(rng, body)
            if marker is None:
                return None
            objects.append((body, marker))
            occupied |= body

        fraction = occupied.mean()
        if not spec.min_body_fraction <= fraction <= spec.max_body_fraction:
            return None
        return objects

    def _marker_position(
        self, rng: np.random.Generator, body: np.ndarray
    ) -> Optional[Tuple[int, int]]:
        """Top-left of a marker whose footprint plus a 1px margin is inside the body."""
        window = self._spec.marker_size + 2
        inside = sliding_window_view(body, (window, window)).all(axis=(-2, -1))
        rows, cols = np.nonzero(inside)
        if rows.size == 0:
            return None
        choice = int(rng.integers(rows.size))
        return int(cols[choice]) + 1, int(rows[choice]) + 1


def generate(spec: DatasetSpec, show_progress: bool = False) -> Dataset:
    return SyntheticDatasetGenerator(spec, show_progress=show_progress).generate()
