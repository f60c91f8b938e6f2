from abc import ABC, abstractmethod
from typing import Tuple

import numpy as np
from PIL import Image, ImageDraw

from fdalign.types import BodyShapeType

BBox = Tuple[int, int, int, int]


class BaseBodyShape(ABC):
    """A convex class-agnostic body rasterized inside an (x0, y0, x1, y1) box."""

    # area of the shape relative to its bounding box
    fill_ratio: float = 1.0

    @staticmethod
    @abstractmethod
    def get_type() -> BodyShapeType:
        pass

    @abstractmethod
    def _draw(self, draw: ImageDraw.ImageDraw, bbox: BBox, rng: np.random.Generator) -> None:
        pass

    def rasterize(self, image_size: int, bbox: BBox, rng: np.random.Generator) -> np.ndarray:
        canvas = Image.new("L", (image_size, image_size), 0)
        self._draw(ImageDraw.Draw(canvas), bbox, rng)
        return np.asarray(canvas) > 0
