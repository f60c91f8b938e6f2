from typing import Sequence

import numpy as np
from sklearn.metrics import average_precision_score

from fdalign.errors import InvalidArgumentError, ShapeMismatchError


def pxap(score_maps: Sequence[np.ndarray], gt_masks: Sequence[np.ndarray]) -> float:
    """Area under the pixel precision-recall curve of all images pooled.

    Uses the step rule sum((R_i - R_{i-1}) * P_i) over distinct thresholds.
    """
    if len(score_maps) != len(gt_masks):
        raise ShapeMismatchError("pxap", (len(score_maps),), (len(gt_masks),))
    for score_map, mask in zip(score_maps, gt_masks):
        if np.shape(score_map) != np.shape(mask):
            raise ShapeMismatchError("pxap", np.shape(score_map), np.shape(mask))
    if not score_maps:
        raise InvalidArgumentError("pxap: no images")

    scores = np.concatenate([np.ravel(score_map) for score_map in score_maps])
    labels = np.concatenate([np.ravel(mask).astype(bool) for mask in gt_masks])
    if not labels.any():
        raise InvalidArgumentError("pxap: no foreground pixels in any mask")
    return float(average_precision_score(labels, scores))
