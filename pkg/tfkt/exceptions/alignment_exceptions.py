""" Exceptions raised by the prototype alignment terms. """

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class NoCommonlyDefinedClass(TfktBaseException):
    """
    Raised when no class has a prototype in both the source and target tables.
    """

    def __init__(self, message="No class is defined in both prototype tables."):
        super().__init__(message)
