from fdalign.types.base_int_enum import BaseIntEnum


class StageType(BaseIntEnum):
    WARM = 1
    TOTAL = 2
