from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from fdalign.errors import InvalidArgumentError, NonDeterministicLossError
from fdalign.logger import init_logger
from fdalign.tensor.tensor import BranchRecorder, Tape, Tensor

logger = init_logger(__name__)

LossFn = Callable[[List[Tensor]], Tensor]
GradTransform = Callable[[np.ndarray], np.ndarray]


@dataclass
class ParamCheck:
    name: str
    shape: tuple
    max_rel_error: float
    checked: int
    skipped: int


@dataclass
class GradCheckReport:
    eps: float
    tol: float
    params: List[ParamCheck] = field(default_factory=list)

    @property
    def max_rel_error(self) -> float:
        return max((p.max_rel_error for p in self.params), default=0.0)

    @property
    def passed(self) -> bool:
        return bool(self.max_rel_error <= self.tol)

    def to_dict(self) -> Dict:
        return {
            "eps": float(self.eps),
            "tol": float(self.tol),
            "passed": self.passed,
            "max_rel_error": float(self.max_rel_error),
            "params": {
                p.name: {
                    "shape": list(p.shape),
                    "max_rel_error": float(p.max_rel_error),
                    "checked": int(p.checked),
                    "skipped": int(p.skipped),
                }
                for p in self.params
            },
        }


def _evaluate(loss_fn: LossFn, values: Sequence[np.ndarray]):
    with BranchRecorder() as recorder:
        loss = loss_fn([Tensor(v) for v in values])
    return loss.item(), recorder.signature()


def grad_check(
    loss_fn: LossFn,
    params: Sequence[Tensor],
    eps: float = 1e-5,
    tol: float = 1e-6,
    names: Optional[Sequence[str]] = None,
    denominator_floor: float = 1e-3,
    grad_transform: Optional[GradTransform] = None,
) -> GradCheckReport:
    """Compares tape gradients of `loss_fn` with central finite differences.

    `loss_fn` receives fresh leaf tensors holding the values of `params` and
    must return a scalar tensor. The relative error of an element is
    |a - n| / max(|a|, |n|, denominator_floor). Probes whose forward pass takes
    a different relu/abs branch than the unperturbed pass straddle a kink and
    are skipped.
    """
    if eps <= 0:
        raise InvalidArgumentError(f"grad_check: eps must be > 0, got {eps}")
    if names is None:
        names = [p.name or f"param_{i}" for i, p in enumerate(params)]

    base_values = [p.numpy() for p in params]
    leaves = [Tensor(v, requires_grad=True) for v in base_values]
    with Tape() as tape:
        with BranchRecorder() as recorder:
            loss = loss_fn(leaves)
        tape.backward(loss)
    base_loss, base_signature = loss.item(), recorder.signature()

    for _ in range(2):
        probe_loss, probe_signature = _evaluate(loss_fn, base_values)
        if probe_loss != base_loss or probe_signature != base_signature:
            raise NonDeterministicLossError(
                f"loss function returned {probe_loss!r} after {base_loss!r} "
                "for identical parameters"
            )

    report = GradCheckReport(eps=eps, tol=tol)
    for index, (name, leaf) in enumerate(zip(names, leaves)):
        analytic = leaf.grad if leaf.grad is not None else np.zeros(leaf.shape)
        if grad_transform is not None:
            analytic = grad_transform(analytic)
        flat_analytic = analytic.reshape(-1)

        max_error, checked, skipped = 0.0, 0, 0
        for position in range(leaf.size):
            probes = []
            for sign in (1.0, -1.0):
                values = list(base_values)
                shifted = base_values[index].copy().reshape(-1)
                shifted[position] += sign * eps
                values[index] = shifted.reshape(leaf.shape)
                probes.append(_evaluate(loss_fn, values))
            (plus, plus_sig), (minus, minus_sig) = probes
            if plus_sig != base_signature or minus_sig != base_signature:
                skipped += 1
                continue

            numeric = (plus - minus) / (2 * eps)
            a = flat_analytic[position]
            denominator = max(abs(a), abs(numeric), denominator_floor)
            max_error = max(max_error, abs(a - numeric) / denominator)
            checked += 1

        report.params.append(
            ParamCheck(
                name=name,
                shape=leaf.shape,
                max_rel_error=max_error,
                checked=checked,
                skipped=skipped,
            )
        )
        logger.debug(
            f"grad_check {name}: max rel err {max_error:.3e}"
            f" ({checked} checked, {skipped} skipped at kinks)"
        )

    return report
