""" Exceptions raised by the training loop. """

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class IncompatibleDomains(TfktBaseException):
    """
    Raised when source and target disagree on dimension or class count.
    """

    def __init__(self, message="Source and target datasets are incompatible."):
        super().__init__(message)


class TrainingInvariantViolated(TfktBaseException):
    """
    Raised by debug checks, e.g. when Step B touches the classifier.
    """

    def __init__(self, message="Training invariant violated."):
        super().__init__(message)


class InvalidHyperparameters(TfktBaseException):
    """
    Raised when hyperparameters violate their ranges.
    """

    def __init__(self, message="Invalid hyperparameters."):
        super().__init__(message)
