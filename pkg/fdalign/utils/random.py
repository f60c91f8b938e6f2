import os
import random

import numpy as np

from fdalign.types import RngStreamType


def set_seeds(seed=42):
    random.seed(seed)
    os.environ["PYTHONHASHSEED"] = str(seed)
    np.random.seed(seed)


def make_rng(seed: int, stream: RngStreamType, *keys: int) -> np.random.Generator:
    """Independent generator for a named substream of the run seed.

    Extra integer keys split a stream further (per split, per sample, per epoch)
    without changing the numbers any other stream sees.
    """
    sequence = np.random.SeedSequence(
        entropy=seed, spawn_key=(int(stream),) + tuple(int(k) for k in keys)
    )
    return np.random.default_rng(sequence)
