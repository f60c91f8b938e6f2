from fdalign.types.base_int_enum import BaseIntEnum


class TrainingModeType(BaseIntEnum):
    VANILLA = 1
    FULL = 2
