""" Lossless decimal text encoding for 64-bit floats. """

import numpy as np


def format_float(value: float) -> str:
    """Shortest decimal string that parses back to the same double."""
    return repr(float(value))


def format_row(values: np.ndarray) -> str:
    """Space separated row of floats."""
    return " ".join(format_float(v) for v in values)


def parse_row(text: str) -> np.ndarray:
    """Inverse of format_row; raises ValueError on a bad token."""
    tokens = text.split()
    return np.array([float(token) for token in tokens], dtype=np.float64)
