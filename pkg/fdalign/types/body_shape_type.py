from fdalign.types.base_int_enum import BaseIntEnum


class BodyShapeType(BaseIntEnum):
    ELLIPSE = 1
    RECTANGLE = 2
    TRIANGLE = 3
