import numpy as np

from fdalign.entities import DropMask
from fdalign.errors import InvalidArgumentError, ShapeMismatchError
from fdalign.tensor import Tensor, apply_op


def channel_mean(f_prime: Tensor) -> Tensor:
    """A_u: mean over channels of F'[:, u] for [D', H', W'] or [N, D', H', W']."""
    if f_prime.data.ndim not in (3, 4):
        raise ShapeMismatchError("channel_mean", f_prime.shape)
    depth = f_prime.shape[-3]
    shape = f_prime.shape

    def backward(grad):
        return (np.broadcast_to(np.expand_dims(grad, -3) / depth, shape),)

    return apply_op(f_prime.data.mean(axis=-3), (f_prime,), backward, "channel_mean")


def attentive_set(attn: np.ndarray, gamma: float) -> np.ndarray:
    """Locations whose activation is strictly above gamma * max, per map."""
    peak = attn.max(axis=(-2, -1), keepdims=True)
    return (attn > gamma * peak) & (peak > 0)


def make_mask(attn, gamma: float, p: float, rng: np.random.Generator) -> DropMask:
    """Drops every attentive location of `attn` independently with probability p.

    `attn` is an [H', W'] map or a stack [N, H', W'] drawn from one generator.
    """
    if not 0 < gamma <= 1:
        raise InvalidArgumentError(f"make_mask: gamma must be in (0, 1], got {gamma}")
    if not 0 <= p <= 1:
        raise InvalidArgumentError(f"make_mask: p must be in [0, 1], got {p}")
    values = attn.data if isinstance(attn, Tensor) else np.asarray(attn, dtype=float)
    if values.ndim not in (2, 3):
        raise ShapeMismatchError("make_mask", values.shape)

    seed_state = rng.bit_generator.state
    attentive = attentive_set(values, gamma)
    dropped = attentive & (rng.random(values.shape) < p)
    return DropMask(keep=~dropped, gamma=gamma, p=p, seed_state=seed_state)


def apply_mask(f_prime: Tensor, mask: DropMask) -> Tensor:
    """Zeroes every channel of F' at dropped locations; the mask is a constant."""
    spatial = f_prime.shape[:-3] + f_prime.shape[-2:]
    if f_prime.data.ndim not in (3, 4) or mask.keep.shape != spatial:
        raise ShapeMismatchError("apply_mask", f_prime.shape, mask.keep.shape)
    keep = np.expand_dims(mask.keep, -3).astype(np.float64)
    return apply_op(f_prime.data * keep, (f_prime,), lambda g: (g * keep,), "apply_mask")
