from fdalign.types.base_int_enum import BaseIntEnum


class SplitType(BaseIntEnum):
    TRAIN = 0
    VAL = 1
    TEST = 2
