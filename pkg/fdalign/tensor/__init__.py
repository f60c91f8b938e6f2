from fdalign.tensor.ften import read_ften, write_ften
from fdalign.tensor.grad_check import GradCheckReport, ParamCheck, grad_check
from fdalign.tensor.ops import (
    add_channel_bias,
    conv2d,
    cross_entropy,
    detach,
    global_average_pool,
    linear_no_bias,
    relu,
    select_row,
)
from fdalign.tensor.tensor import BranchRecorder, Tape, Tensor, active_tape, apply_op

__all__ = [
    BranchRecorder,
    GradCheckReport,
    ParamCheck,
    Tape,
    Tensor,
    active_tape,
    add_channel_bias,
    apply_op,
    conv2d,
    cross_entropy,
    detach,
    global_average_pool,
    grad_check,
    linear_no_bias,
    read_ften,
    relu,
    select_row,
    write_ften,
]
