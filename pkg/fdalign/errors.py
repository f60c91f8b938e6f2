class FdalignError(Exception):
    code = "E_INTERNAL"
    exit_code = 3

    def one_line(self) -> str:
        message = " ".join(str(self).split())
        return f"{self.code}: {message}"


class UsageError(FdalignError):
    code = "E_USAGE"
    exit_code = 1


class ConfigError(UsageError, ValueError):
    pass


class DataError(FdalignError):
    code = "E_DATA"
    exit_code = 2


class DatasetError(DataError):
    pass


class DatasetGenerationError(DatasetError):
    pass


class DatasetExistsError(DatasetError):
    pass


class CheckpointError(DataError):
    pass


class FtenFormatError(DataError):
    pass


class NumericError(FdalignError):
    code = "E_NUMERIC"
    exit_code = 3


class NonFiniteTensorError(NumericError):
    pass


class NonFiniteLossError(NumericError):
    pass


class GradCheckFailedError(NumericError):
    pass


class NonDeterministicLossError(NumericError):
    pass


class MissingGradientError(NumericError):
    pass


class ShapeMismatchError(FdalignError, ValueError):
    code = "E_SHAPE"
    exit_code = 3

    def __init__(self, op: str, *shapes) -> None:
        rendered = " vs ".join(str(tuple(shape)) for shape in shapes)
        super().__init__(f"{op}: shape mismatch {rendered}")


class TapeError(FdalignError):
    code = "E_TAPE"
    exit_code = 3


class InvalidArgumentError(FdalignError, ValueError):
    code = "E_ARGUMENT"
    exit_code = 1
