from typing import Optional


class GeneMachineError(Exception):
    """Base class for every error raised by the gene machine package."""


class InvalidSizeError(GeneMachineError, ValueError):
    pass


class InvalidChromosomeError(GeneMachineError, ValueError):
    pass


class BuildingBlockNotFoundError(GeneMachineError, KeyError):
    pass


class IncompatibleMachinesError(GeneMachineError, ValueError):
    pass


class InvalidStateError(GeneMachineError, RuntimeError):
    pass


class DomainError(GeneMachineError, ValueError):
    pass


class InvalidArgumentError(GeneMachineError, ValueError):
    pass


class BudgetTooSmallError(GeneMachineError, ValueError):
    pass


class ProblemKindError(GeneMachineError, ValueError):
    pass


class TooLargeError(GeneMachineError, ValueError):
    pass


class InvalidConfigError(GeneMachineError, ValueError):
    pass


class UnsupportedFormatError(GeneMachineError, ValueError):
    pass


class InstanceLoadError(GeneMachineError, IOError):
    pass


class ParseError(GeneMachineError, ValueError):
    """Raised by the instance parsers; `line` and `column` are 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(f"{message}{location}")


class ExperimentCellError(GeneMachineError, RuntimeError):
    """Wraps any failure inside one (algorithm, seed) cell of an experiment."""

    def __init__(self, algorithm: str, seed: int, cause: Exception):
        self.algorithm = algorithm
        self.seed = seed
        super().__init__(f"Experiment cell (algorithm='{algorithm}', seed={seed}) failed: {cause}")
