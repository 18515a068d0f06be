""" Exceptions raised while building propagation graphs. """

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class SingularPropagator(TfktBaseException):
    """
    Raised when I - alpha * L is numerically singular.
    """

    def __init__(self, message="Propagator system is numerically singular."):
        super().__init__(message)


class InvalidPropagationParameter(TfktBaseException):
    """
    Raised for an alpha outside (0, 1).
    """

    def __init__(self, message="Alpha must lie in (0, 1)."):
        super().__init__(message)
