from typing import List, Tuple

import numpy as np
from skimage.measure import label as label_components
from skimage.measure import regionprops

from fdalign.entities import Box
from fdalign.errors import InvalidArgumentError
from fdalign.types import NormalizationType


def iou(a: Box, b: Box) -> float:
    inter_w = min(a.x1, b.x1) - max(a.x0, b.x0)
    inter_h = min(a.y1, b.y1) - max(a.y0, b.y0)
    if inter_w <= 0 or inter_h <= 0:
        return 0.0
    intersection = inter_w * inter_h
    return intersection / (a.area + b.area - intersection)


def _interpolate_axis(values: np.ndarray, size: int, axis: int) -> np.ndarray:
    length = values.shape[axis]
    if size == length:
        return values
    if length == 1:
        return np.repeat(values, size, axis=axis)
    positions = np.linspace(0.0, length - 1, size)
    low = np.clip(np.floor(positions).astype(int), 0, length - 2)
    frac_shape = [1] * values.ndim
    frac_shape[axis] = size
    frac = (positions - low).reshape(frac_shape)
    return np.take(values, low, axis=axis) * (1.0 - frac) + np.take(
        values, low + 1, axis=axis
    ) * frac


def upsample_bilinear(score_map: np.ndarray, target: Tuple[int, int]) -> np.ndarray:
    """Align-corners bilinear upsampling of the last two axes."""
    score_map = np.asarray(score_map, dtype=np.float64)
    height, width = target
    if height < score_map.shape[-2] or width < score_map.shape[-1]:
        raise InvalidArgumentError(
            f"upsample target {target} is smaller than source {score_map.shape[-2:]}"
        )
    rows = _interpolate_axis(score_map, height, score_map.ndim - 2)
    return _interpolate_axis(rows, width, score_map.ndim - 1)


def normalize_map(score_map: np.ndarray, normalization: NormalizationType) -> np.ndarray:
    """Min-max to [0, 1], or division by the maximum (negatives stay negative).

    Constant maps and maps with a non-positive maximum give all zeros.
    """
    score_map = np.asarray(score_map, dtype=np.float64)
    high = score_map.max()
    if normalization == NormalizationType.MAX:
        if high <= 0:
            return np.zeros_like(score_map)
        return score_map / high
    low = score_map.min()
    if high == low:
        return np.zeros_like(score_map)
    return (score_map - low) / (high - low)


def check_tau(tau: float) -> None:
    if not 0.0 <= tau <= 1.0:
        raise InvalidArgumentError(f"threshold must be in [0, 1], got {tau}")


def boxes_above(normalized: np.ndarray, tau: float, connectivity: int = 8) -> List[Box]:
    """Tight boxes of the components of {v > tau}, largest component first."""
    if connectivity not in (4, 8):
        raise InvalidArgumentError(f"connectivity must be 4 or 8, got {connectivity}")
    foreground = normalized > tau
    if not foreground.any():
        return []
    components = label_components(foreground, connectivity=1 if connectivity == 4 else 2)
    ranked = []
    for region in regionprops(components):
        min_row, min_col, max_row, max_col = region.bbox
        ranked.append((-int(region.area), min_row, min_col, Box(min_col, min_row, max_col, max_row)))
    ranked.sort(key=lambda item: item[:3])
    return [item[3] for item in ranked]


def extract_boxes(
    score_map: np.ndarray,
    tau: float,
    normalization: NormalizationType = NormalizationType.MINMAX,
    connectivity: int = 8,
) -> List[Box]:
    check_tau(tau)
    return boxes_above(normalize_map(score_map, normalization), tau, connectivity)
