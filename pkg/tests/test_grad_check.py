import numpy as np
import pytest

from fdalign.entities import RegionPartition
from fdalign.errors import InvalidArgumentError, NonDeterministicLossError
from fdalign.losses import loss_sim
from fdalign.tensor import Tensor, grad_check
from fdalign.types import RegionSourceType


def test_quadratic():
    report = grad_check(lambda p: (p[0] * p[0]).sum(), [Tensor([1.0, 2.0])])
    assert report.passed
    assert report.max_rel_error < 1e-9
    assert report.params[0].checked == 2


def test_similarity_loss_with_frozen_partition(rng):
    values = rng.uniform(-1, 1, size=(4, 4))
    fg = values > 0.3
    bg = values < -0.3
    part = RegionPartition(fg=fg, bg=bg, source=RegionSourceType.NORM_BASED)
    report = grad_check(lambda p: loss_sim(p[0], part) * 2.0, [Tensor(values)])
    assert report.passed


def test_corrupted_gradient_fails():
    report = grad_check(
        lambda p: (p[0] * p[0]).sum(),
        [Tensor([1.0, 2.0, -3.0])],
        grad_transform=lambda g: g * 1.01,
    )
    assert not report.passed
    assert report.max_rel_error == pytest.approx(0.01 / 1.01, rel=1e-3)


def test_non_deterministic_loss():
    generator = np.random.default_rng(0)
    with pytest.raises(NonDeterministicLossError):
        grad_check(
            lambda p: (p[0] * float(generator.random())).sum(), [Tensor([1.0])]
        )


def test_bad_eps():
    with pytest.raises(InvalidArgumentError):
        grad_check(lambda p: p[0].sum(), [Tensor([1.0])], eps=0.0)


def test_report_lists_every_parameter():
    report = grad_check(
        lambda p: (p[0] * p[0]).sum() + p[1].sum(),
        [Tensor([1.0]), Tensor([2.0, 3.0])],
        names=["a", "b"],
    )
    assert set(report.to_dict()["params"]) == {"a", "b"}
