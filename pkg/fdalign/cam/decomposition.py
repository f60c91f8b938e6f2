"""Norm / similarity factorization of class activation maps.

For a feature map F [D, H, W] and class weights w_c [D]:

    CAM_u = w_c . F_u = ||w_c|| * ||F_u|| * S(w_c, F_u)

Every op also accepts a leading batch axis; `w_c` is then [N, D] (one class
row per image) or a shared [D].
"""
from typing import Optional, Tuple

import numpy as np

from fdalign.entities import DecompositionMaps
from fdalign.errors import InvalidArgumentError, ShapeMismatchError
from fdalign.tensor import Tensor, apply_op

Extrema = Tuple[np.ndarray, np.ndarray]


def _as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value)


def _check_feature_map(op: str, f_map: Tensor) -> None:
    if f_map.data.ndim not in (3, 4):
        raise ShapeMismatchError(op, f_map.shape)


def _check_weights(op: str, f_map: Tensor, w_c: Tensor) -> None:
    _check_feature_map(op, f_map)
    depth = f_map.shape[-3]
    allowed = ((depth,), f_map.shape[:-3] + (depth,))
    if w_c.shape not in allowed:
        raise ShapeMismatchError(op, f_map.shape, w_c.shape)


def _reduce_weight_grad(grad_w: np.ndarray, w_c: Tensor) -> np.ndarray:
    if grad_w.shape != w_c.shape:
        grad_w = grad_w.reshape(-1, w_c.shape[-1]).sum(axis=0)
    return grad_w


def norm_map(f_map: Tensor) -> Tensor:
    """Per-location L2 norm; the gradient at a zero feature vector is 0."""
    _check_feature_map("norm_map", f_map)
    F = f_map.data
    norms = np.sqrt((F * F).sum(axis=-3))
    safe = np.where(norms > 0, norms, 1.0)

    def backward(grad):
        scale = np.where(norms > 0, grad / safe, 0.0)
        return (np.expand_dims(scale, -3) * F,)

    return apply_op(norms, (f_map,), backward, "norm_map")


def similarity_map(f_map: Tensor, w_c: Tensor, allow_zero_weight: bool = False) -> Tensor:
    """Cosine similarity between w_c and every F_u; 0 where ||F_u|| = 0.

    A zero class weight vector raises unless `allow_zero_weight` is set, in
    which case its whole map is 0 with no gradient.
    """
    _check_weights("similarity_map", f_map, w_c)
    F, w = f_map.data, w_c.data
    w_norm = np.linalg.norm(w, axis=-1)
    w_zero = w_norm == 0
    if np.any(w_zero) and not allow_zero_weight:
        raise InvalidArgumentError("similarity_map: class weight vector is zero")

    w4 = w[..., :, None, None]
    w_norm3 = np.where(w_zero, 1.0, w_norm)[..., None, None]
    f_norm = np.sqrt((F * F).sum(axis=-3))
    valid = (f_norm > 0) & ~np.asarray(w_zero)[..., None, None]
    safe = np.where(valid, f_norm, 1.0)
    dot = (F * w4).sum(axis=-3)
    sim = np.where(valid, dot / (w_norm3 * safe), 0.0)
    sim = np.clip(sim, -1.0, 1.0)

    def backward(grad):
        grad = np.where(valid, grad, 0.0)
        coef = np.expand_dims(grad / (w_norm3 * safe), -3)
        coef_sim = np.expand_dims(grad * sim, -3)
        grad_f = coef * w4 - coef_sim / np.expand_dims(safe * safe, -3) * F
        grad_w = coef * F - coef_sim * w4 / np.expand_dims(w_norm3 * w_norm3, -3)
        return grad_f, _reduce_weight_grad(grad_w.sum(axis=(-2, -1)), w_c)

    return apply_op(sim, (f_map, w_c), backward, "similarity_map")


def minmax_extrema(values) -> Extrema:
    data = values.data if isinstance(values, Tensor) else np.asarray(values)
    return data.min(axis=(-2, -1)), data.max(axis=(-2, -1))


def minmax_normalize(values: Tensor, extrema: Optional[Extrema] = None) -> Tensor:
    """(v - min) / (max - min) per map with the extrema held constant.

    Constant maps normalize to zeros. Passing `extrema` freezes them to values
    computed elsewhere.
    """
    if values.data.ndim < 2:
        raise ShapeMismatchError("minmax_normalize", values.shape)
    low, high = extrema if extrema is not None else minmax_extrema(values)
    low = np.asarray(low, dtype=np.float64)[..., None, None]
    span = np.asarray(high, dtype=np.float64)[..., None, None] - low
    scale = np.where(span > 0, 1.0 / np.where(span > 0, span, 1.0), 0.0)
    out = (values.data - low) * scale
    return apply_op(out, (values,), lambda g: (g * scale,), "minmax_normalize")


def compute_cam(f_map: Tensor, w_c: Tensor) -> Tensor:
    _check_weights("compute_cam", f_map, w_c)
    F, w = f_map.data, w_c.data
    w4 = w[..., :, None, None]

    def backward(grad):
        grad3 = np.expand_dims(grad, -3)
        grad_w = (grad3 * F).sum(axis=(-2, -1))
        return grad3 * w4, _reduce_weight_grad(grad_w, w_c)

    return apply_op((F * w4).sum(axis=-3), (f_map, w_c), backward, "cam")


def similarity_all_classes(f_map, weights) -> np.ndarray:
    """S(w_c, F_u) for every class row of `weights` [C, D] -> [..., C, H, W].

    Rows with zero norm give zero similarity. The result is a constant.
    """
    F = f_map.data if isinstance(f_map, Tensor) else np.asarray(f_map)
    W = weights.data if isinstance(weights, Tensor) else np.asarray(weights)
    if F.ndim not in (3, 4) or W.ndim != 2 or W.shape[1] != F.shape[-3]:
        raise ShapeMismatchError("similarity_all_classes", F.shape, W.shape)
    dot = np.einsum("...dhw,cd->...chw", F, W)
    f_norm = np.expand_dims(np.sqrt((F * F).sum(axis=-3)), -3)
    w_norm = np.linalg.norm(W, axis=1)[:, None, None]
    denominator = f_norm * w_norm
    sim = np.where(denominator > 0, dot / np.where(denominator > 0, denominator, 1.0), 0.0)
    return np.clip(sim, -1.0, 1.0)


def decompose(f_map, w_c, class_index: int) -> DecompositionMaps:
    """Norm map, similarity map, normalized norm and CAM of one image."""
    f_map, w_c = _as_tensor(f_map), _as_tensor(w_c)
    if f_map.data.ndim != 3:
        raise ShapeMismatchError("decompose", f_map.shape)
    norms = norm_map(f_map)
    return DecompositionMaps(
        norm_map=norms.numpy(),
        sim_map=similarity_map(f_map, w_c, allow_zero_weight=True).numpy(),
        norm_hat=minmax_normalize(norms).numpy(),
        cam=compute_cam(f_map, w_c).numpy(),
        class_index=int(class_index),
        weight_norm=float(np.linalg.norm(w_c.data)),
    )
