""" Exceptions raised by the feature generator, classifiers and optimizer. """

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class NonFiniteValue(TfktBaseException):
    """
    Raised when a forward pass or loss becomes non-finite (divergence).
    """

    def __init__(self, message="Non-finite value encountered."):
        super().__init__(message)


class NonFiniteGradient(TfktBaseException):
    """
    Raised by the optimizer when a gradient block holds non-finite entries.
    """

    def __init__(self, message="Non-finite gradient.", block: str | None = None):
        self.block = block
        if block is not None:
            message = f"{message} (block {block})"
        super().__init__(message)


class UndefinedCosine(TfktBaseException):
    """
    Raised when a cosine similarity involves a zero-norm vector.
    """

    def __init__(self, message="Cosine similarity is undefined for zero-norm vectors."):
        super().__init__(message)


class ShapeMismatch(TfktBaseException):
    """
    Raised when parameter, gradient or input shapes disagree.
    """

    def __init__(self, message="Shape mismatch."):
        super().__init__(message)


class MalformedCheckpoint(TfktBaseException):
    """
    Raised when a checkpoint file cannot be parsed.
    """

    def __init__(self, message="Malformed checkpoint file.", line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
