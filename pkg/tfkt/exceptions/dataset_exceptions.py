""" Wraps all the exceptions related to embedding datasets and splits. """

from tfkt.exceptions.tfkt_base_exception import TfktBaseException


class MalformedEmbeddingFile(TfktBaseException):
    """
    Raised when an embedding file does not follow the text format.
    """

    def __init__(self, message="Malformed embedding file.", line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


class InvalidEmbeddingDataset(TfktBaseException):
    """
    Raised when a dataset violates its invariants (labels, shape, finiteness).
    """

    def __init__(self, message="Invalid embedding dataset."):
        super().__init__(message)


class MissingMinorityClass(TfktBaseException):
    """
    Raised when a minority class has no source rows to sample from.
    """

    def __init__(self, message="Minority class has no source rows."):
        super().__init__(message)


class InvalidSyntheticTask(TfktBaseException):
    """
    Raised when a synthetic task specification is not usable.
    """

    def __init__(self, message="Invalid synthetic task specification."):
        super().__init__(message)
