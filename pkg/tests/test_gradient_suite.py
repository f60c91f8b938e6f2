import json

import pytest

from fdalign.config import GradCheckConfig
from fdalign.errors import GradCheckFailedError
from fdalign.model import Model
from fdalign.verification import GradientSuite, run_gradient_suite, tiny_model_config

LOSS_TERMS = ["L_CE", "L_sim", "L_norm", "L_drop", "total", "warm"]


@pytest.fixture(scope="module")
def suite_report():
    return run_gradient_suite(seed=0)


def test_tiny_model_shapes():
    config = tiny_model_config()
    model = Model.initialize(config, seed=0)

    assert config.feature_size() == (4, 4)
    assert model.head_weight.shape == (3, 6)


def test_every_check_passes(suite_report):
    assert suite_report.passed, suite_report.to_dict()["max_rel_error"]
    assert suite_report.failed == []
    suite_report.raise_on_failure()


def test_report_names_every_loss_term(suite_report):
    for name in LOSS_TERMS:
        assert name in suite_report.checks


def test_report_names_layer_ops(suite_report):
    for name in ("conv2d", "relu", "global_average_pool", "norm_map", "similarity_map"):
        assert name in suite_report.checks


def test_report_dict(suite_report):
    data = suite_report.to_dict()

    assert data["passed"] is True
    assert set(data["max_rel_error"]) == set(suite_report.checks)
    assert all(error <= 1e-6 for error in data["max_rel_error"].values())


def test_report_dict_is_json_serializable(suite_report):
    data = json.loads(json.dumps(suite_report.to_dict()))

    assert data["passed"] is True
    for check in data["checks"].values():
        assert isinstance(check["passed"], bool)
        assert isinstance(check["max_rel_error"], float)


def test_injected_bug_is_caught():
    config = GradCheckConfig(inject_gradient_bug=True)
    report = GradientSuite(config, seed=0).run(include_layers=False)

    assert not report.passed
    assert "L_CE" in report.failed
    with pytest.raises(GradCheckFailedError) as excinfo:
        report.raise_on_failure()
    assert excinfo.value.one_line().startswith("E_NUMERIC:")


def test_suite_is_deterministic():
    first = GradientSuite(GradCheckConfig(), seed=5).run(include_layers=False)
    second = GradientSuite(GradCheckConfig(), seed=5).run(include_layers=False)

    assert first.to_dict() == second.to_dict()
