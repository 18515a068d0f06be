""" General Exceptions Module """

# pylint: disable=R0903

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class DimensionMismatch(TfktBaseException):
    """Vectors or matrices have incompatible dimensions"""
    def __init__(self, message: str = "Dimension mismatch"):
        """Initialize the exception"""
        super().__init__(message)


class InvalidMixingCoefficient(TfktBaseException):
    """Mixing coefficient outside [0, 1]"""
    def __init__(self, message: str = "Mixing coefficient must lie in [0, 1]"):
        super().__init__(message)


class StageFailed(TfktBaseException):
    """A pipeline stage failed; wraps the original error with the stage name"""
    def __init__(self, stage: str, cause: Exception):
        self.stage = stage
        self.cause = cause
        super().__init__(f"{stage} failed: {cause}")
