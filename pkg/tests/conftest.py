import numpy as np
import pytest

from fdalign.config import DatasetConfig, ModelConfig
from fdalign.data import DatasetSpec, generate
from fdalign.entities import Box, LocalizationSample
from fdalign.types import SplitType


def pytest_addoption(parser):
    parser.addoption(
        "--run-slow",
        action="store_true",
        default=False,
        help="run the desk-scale training acceptance tests",
    )


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long training runs, needs --run-slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def tiny_model_config():
    return ModelConfig(
        input_channels=3,
        input_size=16,
        conv_blocks=[[4, 3, 2], [6, 3, 2]],
        drop_layer_index=0,
        num_classes=3,
        feature_dim=6,
    )


@pytest.fixture
def small_dataset_config():
    return DatasetConfig(
        num_classes=3,
        train_per_class=4,
        val_per_class=2,
        test_per_class=2,
        image_size=32,
        marker_size=5,
    )


@pytest.fixture
def small_dataset(small_dataset_config):
    return generate(DatasetSpec.from_config(small_dataset_config, seed=7))


def make_sample(box: Box, size: int = 16, label: int = 0, index: int = 0):
    """Blank image whose mask is exactly `box`."""
    mask = np.zeros((size, size), dtype=bool)
    mask[box.y0 : box.y1, box.x0 : box.x1] = True
    return LocalizationSample(
        pixels=np.zeros((size, size, 3), dtype=np.uint8),
        label=label,
        gt_boxes=[box],
        gt_mask=mask,
        split=SplitType.TEST,
        index=index,
    )
