import numpy as np
from PIL import ImageDraw

from fdalign.data.base_body_shape import BaseBodyShape, BBox
from fdalign.types import BodyShapeType


class EllipseBody(BaseBodyShape):
    fill_ratio = np.pi / 4

    @staticmethod
    def get_type() -> BodyShapeType:
        return BodyShapeType.ELLIPSE

    def _draw(self, draw: ImageDraw.ImageDraw, bbox: BBox, rng: np.random.Generator) -> None:
        x0, y0, x1, y1 = bbox
        draw.ellipse((x0, y0, x1 - 1, y1 - 1), fill=255)


class RectangleBody(BaseBodyShape):
    @staticmethod
    def get_type() -> BodyShapeType:
        return BodyShapeType.RECTANGLE

    def _draw(self, draw: ImageDraw.ImageDraw, bbox: BBox, rng: np.random.Generator) -> None:
        x0, y0, x1, y1 = bbox
        draw.rectangle((x0, y0, x1 - 1, y1 - 1), fill=255)


class TriangleBody(BaseBodyShape):
    """Apex on the top edge at a random offset, base along the bottom edge."""

    fill_ratio = 0.5

    @staticmethod
    def get_type() -> BodyShapeType:
        return BodyShapeType.TRIANGLE

    def _draw(self, draw: ImageDraw.ImageDraw, bbox: BBox, rng: np.random.Generator) -> None:
        x0, y0, x1, y1 = bbox
        apex = x0 + rng.uniform(0.2, 0.8) * (x1 - 1 - x0)
        draw.polygon([(apex, y0), (x1 - 1, y1 - 1), (x0, y1 - 1)], fill=255)
