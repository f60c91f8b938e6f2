import numpy as np
import pytest

from fdalign.errors import InvalidArgumentError, ShapeMismatchError
from fdalign.evaluation import pxap


def brute_force_pr_area(score_maps, masks):
    scores = np.concatenate([m.ravel() for m in score_maps])
    labels = np.concatenate([m.ravel() for m in masks]).astype(bool)
    total = labels.sum()
    area, previous_recall = 0.0, 0.0
    for threshold in sorted(set(scores.tolist()), reverse=True):
        predicted = scores >= threshold
        hits = (predicted & labels).sum()
        precision = hits / predicted.sum()
        recall = hits / total
        area += (recall - previous_recall) * precision
        previous_recall = recall
    return area


@pytest.fixture
def masks(rng):
    out = []
    for _ in range(4):
        mask = np.zeros((8, 8), dtype=bool)
        y, x = rng.integers(0, 5, size=2)
        mask[y : y + 3, x : x + 4] = True
        out.append(mask)
    return out


def test_perfect_scores(masks):
    assert pxap([m.astype(float) for m in masks], masks) == pytest.approx(1.0)


def test_anti_correlated_scores(masks):
    value = pxap([1.0 - m for m in masks], masks)
    fg_fraction = np.mean(np.concatenate([m.ravel() for m in masks]))
    assert value == pytest.approx(fg_fraction)
    assert value == pytest.approx(brute_force_pr_area([1.0 - m for m in masks], masks))


def test_random_maps_match_brute_force(rng, masks):
    for _ in range(5):
        maps = [rng.uniform(size=(8, 8)) for _ in masks]
        assert pxap(maps, masks) == pytest.approx(brute_force_pr_area(maps, masks), abs=1e-12)


def test_ties_match_brute_force(rng, masks):
    maps = [np.round(rng.uniform(size=(8, 8)), 1) for _ in masks]
    assert pxap(maps, masks) == pytest.approx(brute_force_pr_area(maps, masks), abs=1e-12)


def test_monotone_transform_invariance(rng, masks):
    maps = [rng.uniform(size=(8, 8)) for _ in masks]
    transformed = [np.exp(3 * m) - 7 for m in maps]
    assert pxap(maps, masks) == pytest.approx(pxap(transformed, masks), abs=1e-12)


def test_no_foreground():
    with pytest.raises(InvalidArgumentError):
        pxap([np.ones((4, 4))], [np.zeros((4, 4), dtype=bool)])


def test_misaligned_shapes(masks):
    with pytest.raises(ShapeMismatchError):
        pxap([np.zeros((4, 4))], masks[:1])
