from fdalign.types.base_int_enum import BaseIntEnum


class NormalizationType(BaseIntEnum):
    MINMAX = 1
    MAX = 2
