import numpy as np
import pytest

from fdalign.entities import Box, DecompositionMaps
from fdalign.evaluation import (
    accumulate_histograms,
    in_box_sim_mass_above,
    region_histograms,
)
from fdalign.evaluation.histograms import in_box_locations

from tests.conftest import make_sample


def _decomp(sim, norm_hat=None):
    norm_hat = np.zeros_like(sim) if norm_hat is None else norm_hat
    return DecompositionMaps(
        norm_map=norm_hat,
        sim_map=sim,
        norm_hat=norm_hat,
        cam=sim * norm_hat,
        class_index=0,
        weight_norm=1.0,
    )


def test_in_box_locations_use_cell_centres():
    inside = in_box_locations(make_sample(Box(4, 4, 12, 12)), (4, 4))
    expected = np.zeros((4, 4), dtype=bool)
    expected[1:3, 1:3] = True
    np.testing.assert_array_equal(inside, expected)


def test_tiny_box_keeps_one_cell():
    inside = in_box_locations(make_sample(Box(0, 0, 1, 1)), (4, 4))
    assert inside.sum() == 1 and inside[0, 0]


def test_constant_similarity_fills_one_bin():
    hist = region_histograms(_decomp(np.full((4, 4), 0.5)), make_sample(Box(4, 4, 12, 12)))
    assert (hist.sim_counts > 0).sum() == 1
    assert hist.num_locations == 4


def test_counts_sum_to_in_box_locations(rng):
    sample = make_sample(Box(2, 3, 13, 10))
    decomp = _decomp(rng.uniform(-1, 1, size=(4, 4)), rng.uniform(size=(4, 4)))
    hist = region_histograms(decomp, sample, bins=7)
    count = in_box_locations(sample, (4, 4)).sum()
    assert hist.sim_counts.sum() == count
    assert hist.norm_counts.sum() == count


def test_extreme_values_are_counted():
    sim = np.array([[-1.0, 1.0], [1.0, -1.0]])
    hist = region_histograms(_decomp(sim, np.array([[0.0, 1.0], [1.0, 0.0]])), make_sample(Box(0, 0, 16, 16)))
    assert hist.sim_counts[0] == 2 and hist.sim_counts[-1] == 2
    assert hist.norm_counts.sum() == 4


def test_accumulate_and_data_frames(rng):
    samples = [make_sample(Box(0, 0, 8, 8), index=i) for i in range(3)]
    decomps = [_decomp(rng.uniform(-1, 1, size=(4, 4))) for _ in samples]
    total = accumulate_histograms(decomps, samples, bins=5)
    assert total.num_locations == 12
    frame = total.sim_df()
    assert list(frame.columns) == ["bin_low", "bin_high", "count"]
    assert frame["bin_low"].iloc[0] == -1.0 and frame["bin_high"].iloc[-1] == 1.0
    assert frame["count"].sum() == 12


def test_mass_above_half():
    sample = make_sample(Box(0, 0, 8, 8))
    sim = np.full((4, 4), -0.2)
    sim[0, 0] = 0.9
    sim[3, 3] = 0.95
    assert in_box_sim_mass_above([_decomp(sim)], [sample]) == pytest.approx(0.25)
