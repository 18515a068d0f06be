""" Exceptions raised by the evaluation protocol. """

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class UndefinedPrototype(TfktBaseException):
    """
    Raised when evaluation meets a class without a prototype.
    """

    def __init__(self, message="Prototype table is incomplete."):
        super().__init__(message)


class MissingTargetLabels(TfktBaseException):
    """
    Raised when evaluation is asked to score an unlabeled target.
    """

    def __init__(self, message="Evaluation needs a fully labeled target dataset."):
        super().__init__(message)


class InconsistentMetrics(TfktBaseException):
    """
    Raised when per-class counts cannot describe one scoring pass.
    """

    def __init__(self, message="Per-class metric counts are inconsistent."):
        super().__init__(message)
