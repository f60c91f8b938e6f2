from typing import Dict, List, Sequence, Tuple

import numpy as np

from fdalign.entities import Box, SweepCurve
from fdalign.errors import InvalidArgumentError, ShapeMismatchError
from fdalign.evaluation.boxes import boxes_above, check_tau, iou, normalize_map
from fdalign.types import NormalizationType

DEFAULT_DELTAS = (0.3, 0.5, 0.7)


def _gt_boxes(sample) -> List[Box]:
    return sample.gt_boxes if hasattr(sample, "gt_boxes") else list(sample)


def _best_iou(boxes: Sequence[Box], gt_boxes: Sequence[Box]) -> float:
    return max((iou(box, gt) for box in boxes for gt in gt_boxes), default=0.0)


def tau_grid(size: int) -> np.ndarray:
    return np.linspace(0.0, 1.0, size)


def check_tau_grid(thresholds: Sequence[float]) -> np.ndarray:
    thresholds = np.asarray(thresholds, dtype=np.float64)
    if thresholds.ndim != 1 or thresholds.size == 0:
        raise InvalidArgumentError("threshold grid must be a nonempty list")
    if np.any(np.diff(thresholds) <= 0):
        raise InvalidArgumentError("threshold grid must be strictly ascending")
    for tau in thresholds:
        check_tau(tau)
    return thresholds


def iou_grid(
    samples,
    score_maps: Sequence[np.ndarray],
    thresholds: Sequence[float],
    normalization: NormalizationType = NormalizationType.MINMAX,
    connectivity: int = 8,
) -> Tuple[np.ndarray, np.ndarray]:
    """Best IoU per (image, threshold) for the largest box and for any box.

    Both arrays are [num_images, num_thresholds]; a map without foreground at
    a threshold scores 0.
    """
    if len(samples) != len(score_maps):
        raise ShapeMismatchError("box metrics", (len(samples),), (len(score_maps),))
    largest = np.zeros((len(samples), len(thresholds)))
    any_box = np.zeros_like(largest)
    for i, (sample, score_map) in enumerate(zip(samples, score_maps)):
        gt_boxes = _gt_boxes(sample)
        normalized = normalize_map(score_map, normalization)
        for j, tau in enumerate(thresholds):
            boxes = boxes_above(normalized, tau, connectivity)
            if not boxes:
                continue
            largest[i, j] = _best_iou(boxes[:1], gt_boxes)
            any_box[i, j] = _best_iou(boxes, gt_boxes)
    return largest, any_box


def box_accuracy(
    samples,
    score_maps: Sequence[np.ndarray],
    tau: float,
    delta: float,
    multi: bool = False,
    normalization: NormalizationType = NormalizationType.MINMAX,
    connectivity: int = 8,
) -> float:
    check_tau(tau)
    if not samples:
        return 0.0
    largest, any_box = iou_grid(samples, score_maps, [tau], normalization, connectivity)
    best = any_box if multi else largest
    return float(np.mean(best[:, 0] >= delta))


def maxboxaccv2(
    samples,
    score_maps: Sequence[np.ndarray],
    deltas: Sequence[float] = DEFAULT_DELTAS,
    thresholds: Sequence[float] = None,
    normalization: NormalizationType = NormalizationType.MINMAX,
    connectivity: int = 8,
) -> Tuple[Dict[float, float], float, SweepCurve]:
    thresholds = check_tau_grid(tau_grid(101) if thresholds is None else thresholds)
    if not samples:
        raise InvalidArgumentError("maxboxaccv2 needs at least one image")
    _, any_box = iou_grid(samples, score_maps, thresholds, normalization, connectivity)
    return maxboxaccv2_from_grid(any_box, thresholds, deltas)


def maxboxaccv2_from_grid(
    any_box: np.ndarray, thresholds: Sequence[float], deltas: Sequence[float]
) -> Tuple[Dict[float, float], float, SweepCurve]:
    accuracy_per_iou = {
        float(delta): (any_box >= delta).mean(axis=0).tolist() for delta in deltas
    }
    curve = SweepCurve(
        thresholds=[float(tau) for tau in thresholds],
        accuracy_per_iou=accuracy_per_iou,
    )
    per_delta = {delta: curve.best(delta) for delta in accuracy_per_iou}
    return per_delta, float(np.mean(list(per_delta.values()))), curve


def best_threshold(
    largest: np.ndarray, thresholds: Sequence[float], delta: float
) -> Tuple[float, float]:
    """Threshold maximizing single-box GT Loc; the first one wins ties."""
    accuracy = (largest >= delta).mean(axis=0)
    best = int(np.argmax(accuracy))
    return float(thresholds[best]), float(accuracy[best])


def top_k_hits(logits: np.ndarray, labels: Sequence[int], k: int) -> np.ndarray:
    logits = np.atleast_2d(np.asarray(logits, dtype=np.float64))
    if not 1 <= k <= logits.shape[1]:
        raise InvalidArgumentError(f"k must be in [1, {logits.shape[1]}], got {k}")
    ranked = np.argsort(-logits, axis=1, kind="stable")[:, :k]
    return (ranked == np.asarray(labels)[:, None]).any(axis=1)


def top_k_gt_loc(
    samples,
    score_maps: Sequence[np.ndarray],
    logits_per_sample: np.ndarray,
    k: int,
    delta: float,
    tau: float,
    normalization: NormalizationType = NormalizationType.MINMAX,
    connectivity: int = 8,
) -> Tuple[float, float]:
    """(Top-k Loc, GT Loc) with the largest-component box of the GT-class map."""
    check_tau(tau)
    if len(samples) != len(logits_per_sample):
        raise ShapeMismatchError("top_k_gt_loc", (len(samples),), (len(logits_per_sample),))
    if not samples:
        return 0.0, 0.0
    largest, _ = iou_grid(samples, score_maps, [tau], normalization, connectivity)
    localized = largest[:, 0] >= delta
    hits = top_k_hits(logits_per_sample, [sample.label for sample in samples], k)
    return float(np.mean(localized & hits)), float(np.mean(localized))
