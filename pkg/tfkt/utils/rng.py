""" Seeded random generator streams, one per concern of a run. """

import numpy as np

STREAMS = ("split", "init", "augment", "episode", "synthetic")


def make_rng(seed: int, stream: str = "") -> np.random.Generator:
    """
    Build an independent generator for one named concern of a seeded run.

    The same (seed, stream) pair always yields the same sequence; distinct streams
    never share state.
    """
    if not stream:
        return np.random.default_rng(seed)
    return np.random.default_rng([seed, STREAMS.index(stream) + 1])
