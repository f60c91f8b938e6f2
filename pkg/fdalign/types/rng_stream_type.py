from fdalign.types.base_int_enum import BaseIntEnum


class RngStreamType(BaseIntEnum):
    # values are part of the seed derivation; never renumber
    INIT = 0
    DATA_ORDER = 1
    DROPOUT = 2
    DATASET = 3
    GRADCHECK = 4
