from typing import List, Optional

import numpy as np

from fdalign.entities.base_entity import BaseEntity
from fdalign.entities.box import Box
from fdalign.types import SplitType


class LocalizationSample(BaseEntity):
    """One synthetic image with its class label and localization ground truth.

    Pixels are kept as the quantized uint8 buffer that is written to disk, so
    a saved and reloaded sample is identical to the generated one.
    """

    def __init__(
        self,
        pixels: np.ndarray,
        label: int,
        gt_boxes: List[Box],
        gt_mask: np.ndarray,
        split: SplitType,
        index: int,
        marker_box: Optional[Box] = None,
    ) -> None:
        self._pixels = np.asarray(pixels, dtype=np.uint8)
        self._label = int(label)
        self._gt_boxes = list(gt_boxes)
        self._gt_mask = np.asarray(gt_mask, dtype=bool)
        self._split = split
        self._index = index
        self._marker_box = marker_box

        self._pixels.flags.writeable = False
        self._gt_mask.flags.writeable = False

    @property
    def pixels(self) -> np.ndarray:
        return self._pixels

    @property
    def image(self) -> np.ndarray:
        """H x W x 3 floats in [0, 1]."""
        return self._pixels.astype(np.float64) / 255.0

    @property
    def chw(self) -> np.ndarray:
        return np.ascontiguousarray(self.image.transpose(2, 0, 1))

    @property
    def label(self) -> int:
        return self._label

    @property
    def gt_boxes(self) -> List[Box]:
        return self._gt_boxes

    @property
    def gt_mask(self) -> np.ndarray:
        return self._gt_mask

    @property
    def split(self) -> SplitType:
        return self._split

    @property
    def index(self) -> int:
        return self._index

    @property
    def marker_box(self) -> Optional[Box]:
        return self._marker_box

    @property
    def height(self) -> int:
        return self._pixels.shape[0]

    @property
    def width(self) -> int:
        return self._pixels.shape[1]

    @property
    def name(self) -> str:
        return f"{self._split}_{self._index:05d}"

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalizationSample):
            return NotImplemented
        return (
            self._label == other._label
            and self._split == other._split
            and self._index == other._index
            and self._gt_boxes == other._gt_boxes
            and self._marker_box == other._marker_box
            and np.array_equal(self._pixels, other._pixels)
            and np.array_equal(self._gt_mask, other._gt_mask)
        )

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "label": self._label,
            "split": str(self._split),
            "boxes": [box.to_list() for box in self._gt_boxes],
            "marker_box": self._marker_box.to_list() if self._marker_box else None,
        }
