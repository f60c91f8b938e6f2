from fdalign.data.body_shapes import EllipseBody, RectangleBody, TriangleBody
from fdalign.types import BodyShapeType
from fdalign.utils.base_registry import BaseRegistry


class BodyShapeRegistry(BaseRegistry):
    _key_class = BodyShapeType


BodyShapeRegistry.register(BodyShapeType.ELLIPSE, EllipseBody)
BodyShapeRegistry.register(BodyShapeType.RECTANGLE, RectangleBody)
BodyShapeRegistry.register(BodyShapeType.TRIANGLE, TriangleBody)
