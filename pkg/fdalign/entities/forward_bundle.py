from dataclasses import dataclass

from fdalign.tensor import Tensor


@dataclass(frozen=True)
class ForwardBundle:
    f_prime: Tensor
    f_map: Tensor
    pooled: Tensor
    logits: Tensor
