from fdalign.types.base_int_enum import BaseIntEnum


class MapSourceType(BaseIntEnum):
    CAM = 1
    NORM = 2
    SIM = 3
