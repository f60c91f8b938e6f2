from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np
import pandas as pd

from fdalign.entities import DecompositionMaps, LocalizationSample

SIM_RANGE = (-1.0, 1.0)
NORM_HAT_RANGE = (0.0, 1.0)


@dataclass
class RegionHistograms:
    """In-box histograms of the similarity map and the normalized norm map."""

    sim_counts: np.ndarray
    sim_edges: np.ndarray
    norm_counts: np.ndarray
    norm_edges: np.ndarray

    @property
    def num_locations(self) -> int:
        return int(self.sim_counts.sum())

    def __add__(self, other: "RegionHistograms") -> "RegionHistograms":
        return RegionHistograms(
            sim_counts=self.sim_counts + other.sim_counts,
            sim_edges=self.sim_edges,
            norm_counts=self.norm_counts + other.norm_counts,
            norm_edges=self.norm_edges,
        )

    @staticmethod
    def _to_df(counts: np.ndarray, edges: np.ndarray) -> pd.DataFrame:
        return pd.DataFrame(
            {"bin_low": edges[:-1], "bin_high": edges[1:], "count": counts.astype(int)}
        )

    def sim_df(self) -> pd.DataFrame:
        return self._to_df(self.sim_counts, self.sim_edges)

    def norm_df(self) -> pd.DataFrame:
        return self._to_df(self.norm_counts, self.norm_edges)


def in_box_locations(
    sample: LocalizationSample, feature_shape: Tuple[int, int]
) -> np.ndarray:
    """Feature cells whose centre falls inside a ground-truth box.

    A box too small to contain any centre contributes the cell under its own
    centre.
    """
    height, width = feature_shape
    scale_y = sample.height / height
    scale_x = sample.width / width
    centers_y = (np.arange(height) + 0.5) * scale_y
    centers_x = (np.arange(width) + 0.5) * scale_x
    inside = np.zeros(feature_shape, dtype=bool)
    for box in sample.gt_boxes:
        rows = (centers_y >= box.y0) & (centers_y < box.y1)
        cols = (centers_x >= box.x0) & (centers_x < box.x1)
        if rows.any() and cols.any():
            inside |= rows[:, None] & cols[None, :]
        else:
            row = min(int((box.y0 + box.y1) / 2 / scale_y), height - 1)
            col = min(int((box.x0 + box.x1) / 2 / scale_x), width - 1)
            inside[row, col] = True
    return inside


def region_histograms(
    decomp: DecompositionMaps, sample: LocalizationSample, bins: int = 20
) -> RegionHistograms:
    inside = in_box_locations(sample, decomp.sim_map.shape)
    sim_counts, sim_edges = np.histogram(decomp.sim_map[inside], bins=bins, range=SIM_RANGE)
    norm_counts, norm_edges = np.histogram(
        decomp.norm_hat[inside], bins=bins, range=NORM_HAT_RANGE
    )
    return RegionHistograms(sim_counts, sim_edges, norm_counts, norm_edges)


def accumulate_histograms(
    decomps: Iterable[DecompositionMaps],
    samples: Iterable[LocalizationSample],
    bins: int = 20,
) -> RegionHistograms:
    total = RegionHistograms(
        sim_counts=np.zeros(bins, dtype=np.int64),
        sim_edges=np.linspace(*SIM_RANGE, bins + 1),
        norm_counts=np.zeros(bins, dtype=np.int64),
        norm_edges=np.linspace(*NORM_HAT_RANGE, bins + 1),
    )
    for decomp, sample in zip(decomps, samples):
        total = total + region_histograms(decomp, sample, bins)
    return total


def in_box_sim_mass_above(
    decomps: Iterable[DecompositionMaps],
    samples: Iterable[LocalizationSample],
    value: float = 0.5,
) -> float:
    """Fraction of in-box feature locations whose similarity exceeds `value`."""
    above = total = 0
    for decomp, sample in zip(decomps, samples):
        inside = decomp.sim_map[in_box_locations(sample, decomp.sim_map.shape)]
        above += int((inside > value).sum())
        total += inside.size
    return above / total if total else 0.0
