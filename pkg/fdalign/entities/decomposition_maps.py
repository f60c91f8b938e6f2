from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class DecompositionMaps:
    """CAM of one image and class together with its norm/similarity factors.

    cam == weight_norm * norm_map * sim_map holds elementwise.
    """

    norm_map: np.ndarray
    sim_map: np.ndarray
    norm_hat: np.ndarray
    cam: np.ndarray
    class_index: int
    weight_norm: float
