from dataclasses import asdict, dataclass
from typing import List, Tuple

import numpy as np
from sklearn.linear_model import LogisticRegression

from fdalign.data.dataset import Dataset
from fdalign.data.markers import luminance
from fdalign.entities import LocalizationSample
from fdalign.errors import DatasetError
from fdalign.logger import init_logger
from fdalign.types import SplitType

logger = init_logger(__name__)

MIN_PROBE_ACCURACY = 0.9
MAX_MARKER_COVERAGE = 0.05


@dataclass(frozen=True)
class MarkerProbeReport:
    accuracy: float
    mean_coverage: float
    max_coverage: float
    train_samples: int
    test_samples: int

    @property
    def passed(self) -> bool:
        return (
            self.accuracy > MIN_PROBE_ACCURACY
            and self.max_coverage < MAX_MARKER_COVERAGE
        )

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def marker_features(sample: LocalizationSample) -> np.ndarray:
    """Marker crop as contrast against the surrounding one-pixel ring of body."""
    if sample.marker_box is None:
        raise DatasetError(f"sample {sample.name} has no marker box")
    box = sample.marker_box
    gray = luminance(sample.image)
    ring = gray[box.y0 - 1 : box.y1 + 1, box.x0 - 1 : box.x1 + 1].copy()
    ring[1:-1, 1:-1] = np.nan
    body_level = np.nanmedian(ring)
    crop = gray[box.y0 : box.y1, box.x0 : box.x1]
    return np.abs(crop - body_level).ravel()


def marker_coverage(sample: LocalizationSample) -> float:
    return sample.marker_box.area / max(int(sample.gt_mask.sum()), 1)


def _split_arrays(samples: List[LocalizationSample]) -> Tuple[np.ndarray, np.ndarray]:
    features = np.stack([marker_features(sample) for sample in samples])
    labels = np.array([sample.label for sample in samples])
    return features, labels


def run_marker_probe(dataset: Dataset, seed: int = 0) -> MarkerProbeReport:
    """Fits a linear classifier on marker crops alone.

    High accuracy with a marker covering a few percent of the object shows the
    class is decidable from a small discriminative part.
    """
    train = dataset.split(SplitType.TRAIN)
    test = dataset.split(SplitType.TEST) or dataset.split(SplitType.VAL) or train
    if not train:
        raise DatasetError("marker probe needs a non-empty train split")

    train_x, train_y = _split_arrays(train)
    test_x, test_y = _split_arrays(test)

    if len(np.unique(train_y)) < 2:
        accuracy = float(np.mean(test_y == train_y[0]))
    else:
        probe = LogisticRegression(max_iter=1000, random_state=seed)
        probe.fit(train_x, train_y)
        accuracy = float(probe.score(test_x, test_y))

    coverage = np.array([marker_coverage(sample) for sample in test])
    report = MarkerProbeReport(
        accuracy=accuracy,
        mean_coverage=float(coverage.mean()),
        max_coverage=float(coverage.max()),
        train_samples=len(train),
        test_samples=len(test),
    )
    logger.info(
        f"Marker probe: accuracy {report.accuracy:.3f},"
        f" coverage mean {report.mean_coverage:.4f} max {report.max_coverage:.4f}"
    )
    return report
