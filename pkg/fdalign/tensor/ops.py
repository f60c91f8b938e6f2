"""Differentiable ops used by the backbone and the losses.

Image-like inputs are [C, H, W] or carry one leading batch axis [N, C, H, W];
vector inputs are [D] or [N, D].
"""
from typing import Sequence, Union

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from fdalign.errors import InvalidArgumentError, ShapeMismatchError
from fdalign.tensor.tensor import Tensor, apply_op, note_branches

Labels = Union[int, Sequence[int], np.ndarray]


def conv2d(input: Tensor, kernel: Tensor, stride: int = 1, padding: int = 0) -> Tensor:
    """Cross-correlation with a [C_out, C_in, kh, kw] kernel."""
    if input.data.ndim not in (3, 4) or kernel.data.ndim != 4:
        raise ShapeMismatchError("conv2d", input.shape, kernel.shape)
    if input.shape[-3] != kernel.shape[1]:
        raise ShapeMismatchError("conv2d", input.shape, kernel.shape)
    if stride < 1:
        raise InvalidArgumentError(f"conv2d: stride must be >= 1, got {stride}")
    if padding < 0:
        raise InvalidArgumentError(f"conv2d: padding must be >= 0, got {padding}")

    batched = input.data.ndim == 4
    x = input.data if batched else input.data[None]
    _, _, height, width = x.shape
    _, _, kh, kw = kernel.shape
    if height + 2 * padding < kh or width + 2 * padding < kw:
        raise ShapeMismatchError("conv2d", input.shape, kernel.shape)

    pad = ((0, 0), (0, 0), (padding, padding), (padding, padding))
    x_padded = np.pad(x, pad)
    # [N, C_in, H', W', kh, kw]
    windows = sliding_window_view(x_padded, (kh, kw), axis=(2, 3))[
        :, :, ::stride, ::stride
    ]
    k = kernel.data
    out = np.tensordot(windows, k, axes=([1, 4, 5], [1, 2, 3])).transpose(0, 3, 1, 2)
    out_h, out_w = out.shape[2:]

    def backward(grad):
        grad = grad if batched else grad[None]
        grad_kernel = np.tensordot(grad, windows, axes=([0, 2, 3], [0, 2, 3]))
        # [N, H', W', C_in, kh, kw]
        columns = np.tensordot(grad, k, axes=([1], [0])).transpose(0, 3, 1, 2, 4, 5)
        grad_padded = np.zeros(x_padded.shape)
        for i in range(kh):
            for j in range(kw):
                grad_padded[
                    :,
                    :,
                    i : i + stride * (out_h - 1) + 1 : stride,
                    j : j + stride * (out_w - 1) + 1 : stride,
                ] += columns[..., i, j]
        grad_input = grad_padded[
            :, :, padding : padding + height, padding : padding + width
        ]
        return (grad_input if batched else grad_input[0]), grad_kernel

    return apply_op(out if batched else out[0], (input, kernel), backward, "conv2d")


def add_channel_bias(input: Tensor, bias: Tensor) -> Tensor:
    if input.data.ndim not in (3, 4) or bias.shape != (input.shape[-3],):
        raise ShapeMismatchError("add_channel_bias", input.shape, bias.shape)
    out = input.data + bias.data[:, None, None]
    reduce_axes = tuple(a for a in range(input.data.ndim) if a != input.data.ndim - 3)
    return apply_op(
        out,
        (input, bias),
        lambda g: (g, g.sum(axis=reduce_axes)),
        "add_channel_bias",
    )


def relu(input: Tensor) -> Tensor:
    x = input.data
    active = x > 0
    note_branches(active)
    # subgradient at 0 is 0
    return apply_op(np.maximum(x, 0.0), (input,), lambda g: (g * active,), "relu")


def global_average_pool(input: Tensor) -> Tensor:
    if input.data.ndim not in (3, 4):
        raise ShapeMismatchError("global_average_pool", input.shape)
    height, width = input.shape[-2:]
    scale = 1.0 / (height * width)
    shape = input.shape

    def backward(grad):
        return (np.broadcast_to(grad[..., None, None] * scale, shape),)

    return apply_op(input.data.mean(axis=(-2, -1)), (input,), backward, "gap")


def linear_no_bias(input: Tensor, weights: Tensor) -> Tensor:
    if input.data.ndim not in (1, 2) or weights.data.ndim != 2:
        raise ShapeMismatchError("linear_no_bias", input.shape, weights.shape)
    if weights.shape[1] != input.shape[-1]:
        raise ShapeMismatchError("linear_no_bias", input.shape, weights.shape)
    x, w = input.data, weights.data

    def backward(grad):
        grad_weights = np.outer(grad, x) if x.ndim == 1 else grad.T @ x
        return grad @ w, grad_weights

    return apply_op(x @ w.T, (input, weights), backward, "linear_no_bias")


def select_row(matrix: Tensor, index: int) -> Tensor:
    rows = matrix.shape[0]
    if not 0 <= index < rows:
        raise InvalidArgumentError(f"select_row: index {index} outside [0, {rows})")

    def backward(grad):
        full = np.zeros(matrix.shape)
        full[index] = grad
        return (full,)

    return apply_op(matrix.data[index], (matrix,), backward, "select_row")


def select_rows(matrix: Tensor, indices: Sequence[int]) -> Tensor:
    """Gathers rows [N, D]; repeated indices accumulate their gradients."""
    indices = np.asarray(indices, dtype=np.int64)
    rows = matrix.shape[0]
    if indices.size and (indices.min() < 0 or indices.max() >= rows):
        raise InvalidArgumentError(f"select_rows: indices outside [0, {rows})")

    def backward(grad):
        full = np.zeros(matrix.shape)
        np.add.at(full, indices, grad)
        return (full,)

    return apply_op(matrix.data[indices], (matrix,), backward, "select_rows")


def detach(input: Tensor) -> Tensor:
    return Tensor(input.data, requires_grad=False)


def cross_entropy(logits: Tensor, label: Labels) -> Tensor:
    """-log softmax(logits)[label] with max subtraction.

    For [N, C] logits `label` holds N labels and the result is the [N] vector of
    per-sample losses.
    """
    if logits.data.ndim not in (1, 2):
        raise ShapeMismatchError("cross_entropy", logits.shape)
    num_classes = logits.shape[-1]
    labels = np.asarray(label, dtype=np.int64)
    if labels.shape != logits.shape[:-1]:
        raise ShapeMismatchError("cross_entropy", logits.shape, labels.shape)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise InvalidArgumentError(
            f"cross_entropy: label {label} outside [0, {num_classes})"
        )
    z = logits.data
    shifted = z - z.max(axis=-1, keepdims=True)
    log_sum_exp = np.log(np.exp(shifted).sum(axis=-1, keepdims=True))
    one_hot = np.eye(num_classes)[labels]
    loss = (log_sum_exp[..., 0] - (shifted * one_hot).sum(axis=-1))

    def backward(grad):
        probs = np.exp(shifted - log_sum_exp)
        return (np.asarray(grad)[..., None] * (probs - one_hot),)

    return apply_op(loss, (logits,), backward, "cross_entropy")
