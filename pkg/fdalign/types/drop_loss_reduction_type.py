from fdalign.types.base_int_enum import BaseIntEnum


class DropLossReductionType(BaseIntEnum):
    MEAN = 1
    SUM = 2
