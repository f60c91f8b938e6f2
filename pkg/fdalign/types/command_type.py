from fdalign.types.base_int_enum import BaseIntEnum


class CommandType(BaseIntEnum):
    GEN_DATA = 1
    TRAIN = 2
    EVAL = 3
    DECOMPOSE = 4
    SWEEP = 5
    GRADCHECK = 6

    def __str__(self):
        return self.name.lower().replace("_", "-")
