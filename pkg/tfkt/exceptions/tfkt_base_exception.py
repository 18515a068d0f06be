"""
        - Base class for every error raised by the tfkt library.

        - Command handlers map subclasses of this class to exit code 1.
"""


class TfktBaseException(Exception):
    """
    Base exception for the tfkt library.
    """
    message = "An error occurred."

    def __init__(self, message: str | None = None):
        self.message = message or self.message
        super().__init__(self.message)
