import threading
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from fdalign.errors import NonFiniteTensorError, ShapeMismatchError, TapeError

BackwardFn = Callable[[np.ndarray], Sequence[Optional[np.ndarray]]]
Operand = Union["Tensor", float, int]

_local = threading.local()


def _tape_stack() -> List["Tape"]:
    if not hasattr(_local, "stack"):
        _local.stack = []
    return _local.stack


def active_tape() -> Optional["Tape"]:
    stack = _tape_stack()
    return stack[-1] if stack else None


class BranchRecorder:
    """Collects which branch every piecewise op (relu, abs) took in a forward pass.

    Two forward passes with equal signatures evaluate the same smooth piece of
    the loss, so a central difference between them is meaningful.
    """

    def __init__(self) -> None:
        self._patterns: List[bytes] = []

    def __enter__(self) -> "BranchRecorder":
        if not hasattr(_local, "recorders"):
            _local.recorders = []
        _local.recorders.append(self)
        return self

    def __exit__(self, *exc) -> None:
        _local.recorders.remove(self)

    def signature(self) -> Tuple[bytes, ...]:
        return tuple(self._patterns)

    def note(self, pattern: np.ndarray) -> None:
        self._patterns.append(np.asarray(pattern, dtype=np.int8).tobytes())


def note_branches(pattern: np.ndarray) -> None:
    for recorder in getattr(_local, "recorders", ()):
        recorder.note(pattern)


class Tensor:
    """Dense float64 array that can take part in a gradient tape.

    The value buffer is read-only after construction. Only `grad` changes, and
    only while the owning tape runs its backward pass.
    """

    __slots__ = ("_data", "requires_grad", "grad", "name")

    def __init__(
        self,
        data,
        requires_grad: bool = False,
        name: Optional[str] = None,
    ) -> None:
        array = np.array(data, dtype=np.float64)
        if not np.isfinite(array).all():
            raise NonFiniteTensorError(
                f"tensor {name or ''} of shape {array.shape} holds NaN/Inf values"
            )
        array.flags.writeable = False
        self._data = array
        self.requires_grad = requires_grad
        self.grad: Optional[np.ndarray] = None
        self.name = name

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def shape(self) -> Tuple[int, ...]:
        return self._data.shape

    @property
    def size(self) -> int:
        return self._data.size

    def numpy(self) -> np.ndarray:
        return self._data.copy()

    def item(self) -> float:
        if self._data.size != 1:
            raise ShapeMismatchError("item", self.shape, ())
        return float(self._data.reshape(-1)[0])

    def backward(self) -> None:
        tape = active_tape()
        if tape is None:
            raise TapeError("backward() called outside of a Tape context")
        tape.backward(self)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    # elementwise arithmetic: same shape or python scalar
    def __add__(self, other: Operand) -> "Tensor":
        if isinstance(other, Tensor):
            _check_same_shape("add", self, other)
            return apply_op(
                self._data + other._data, (self, other), lambda g: (g, g), "add"
            )
        return apply_op(self._data + float(other), (self,), lambda g: (g,), "add")

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        return apply_op(-self._data, (self,), lambda g: (-g,), "neg")

    def __sub__(self, other: Operand) -> "Tensor":
        return self + (-other)

    def __rsub__(self, other: Operand) -> "Tensor":
        return (-self) + other

    def __mul__(self, other: Operand) -> "Tensor":
        if isinstance(other, Tensor):
            _check_same_shape("mul", self, other)
            a, b = self._data, other._data
            return apply_op(a * b, (self, other), lambda g: (g * b, g * a), "mul")
        scale = float(other)
        return apply_op(self._data * scale, (self,), lambda g: (g * scale,), "mul")

    __rmul__ = __mul__

    def __truediv__(self, other: Union[float, int]) -> "Tensor":
        if isinstance(other, Tensor):
            raise TypeError("division by a tensor is not supported")
        return self * (1.0 / float(other))

    def sum(self) -> "Tensor":
        shape = self.shape
        return apply_op(
            np.sum(self._data), (self,), lambda g: (np.full(shape, g),), "sum"
        )

    def mean(self) -> "Tensor":
        return self.sum() / self.size


def _check_same_shape(op: str, a: Tensor, b: Tensor) -> None:
    if a.shape != b.shape:
        raise ShapeMismatchError(op, a.shape, b.shape)


@dataclass
class TapeEntry:
    op: str
    inputs: Tuple[Tensor, ...]
    output: Tensor
    backward: BackwardFn


class Tape:
    """Ordered record of the operations executed inside its context.

    Entries are appended as operations run, so the record is topologically
    sorted by construction. One `backward` call walks it in reverse and
    accumulates gradients across fan-out. A tape can be traversed once.
    """

    def __init__(self) -> None:
        self._entries: List[TapeEntry] = []
        self._consumed = False

    def __enter__(self) -> "Tape":
        _tape_stack().append(self)
        return self

    def __exit__(self, *exc) -> None:
        stack = _tape_stack()
        if stack and stack[-1] is self:
            stack.pop()

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def entries(self) -> List[TapeEntry]:
        return list(self._entries)

    def record(self, entry: TapeEntry) -> None:
        if self._consumed:
            raise TapeError("cannot record on a tape after its backward pass")
        self._entries.append(entry)

    def backward(self, loss: Tensor) -> None:
        if self._consumed:
            raise TapeError("tape already consumed by a previous backward pass")
        if loss.size != 1:
            raise TapeError(f"backward needs a scalar loss, got shape {loss.shape}")
        self._consumed = True

        grads = {id(loss): np.ones(loss.shape)}
        touched = {id(loss): loss}
        for entry in reversed(self._entries):
            out_grad = grads.get(id(entry.output))
            if out_grad is None:
                continue
            input_grads = entry.backward(out_grad)
            for tensor, grad in zip(entry.inputs, input_grads):
                if grad is None or not tensor.requires_grad:
                    continue
                key = id(tensor)
                if key in grads:
                    grads[key] = grads[key] + grad
                else:
                    grads[key] = np.array(grad, dtype=np.float64)
                    touched[key] = tensor

        for key, tensor in touched.items():
            if not tensor.requires_grad:
                continue
            if tensor.grad is None:
                tensor.grad = grads[key]
            else:
                tensor.grad = tensor.grad + grads[key]


def apply_op(
    out_data: np.ndarray,
    inputs: Sequence[Tensor],
    backward: BackwardFn,
    op: str,
) -> Tensor:
    """Wraps an op result and records it on the active tape when needed.

    Outside a tape no graph is kept, which is the inference path.
    """
    tape = active_tape()
    needs_grad = tape is not None and any(t.requires_grad for t in inputs)
    out = Tensor(out_data, requires_grad=needs_grad)
    if needs_grad:
        tape.record(TapeEntry(op, tuple(inputs), out, backward))
    return out
