"""Full-size training runs on the default synthetic dataset (`--run-slow`)."""

import pytest

from fdalign.config import DatasetConfig, RunConfig
from fdalign.data import DatasetSpec, generate
from fdalign.evaluation import Evaluator
from fdalign.trainer import Trainer
from fdalign.types import MapSourceType, SplitType

SEEDS = [0, 1, 2]
MIN_GT_LOC_GAP = 0.10
MAX_MAP_SOURCE_GAP = 0.10

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def runs(tmp_path_factory):
    results = {}
    for seed in SEEDS:
        dataset = generate(DatasetSpec.from_config(DatasetConfig(), seed=seed))
        for mode in ("full", "vanilla"):
            output_dir = tmp_path_factory.mktemp(f"{mode}_{seed}")
            config = RunConfig(seed=seed, mode=mode, output_dir=str(output_dir))
            results[seed, mode] = (config, dataset, Trainer(config, dataset).run())
    return results


def test_full_mode_fits_training_set(runs):
    for seed in SEEDS:
        _, _, result = runs[seed, "full"]
        assert result.train_log.records[-1].train_acc >= 0.95


def test_alignment_improves_gt_loc(runs):
    wins = 0
    for seed in SEEDS:
        full = runs[seed, "full"][2].evaluation.report
        vanilla = runs[seed, "vanilla"][2].evaluation.report
        if full.gt_loc - vanilla.gt_loc >= MIN_GT_LOC_GAP:
            wins += 1
    assert wins >= 2


def test_alignment_raises_in_mask_similarity(runs):
    wins = 0
    for seed in SEEDS:
        full = runs[seed, "full"][2].evaluation.report
        vanilla = runs[seed, "vanilla"][2].evaluation.report
        if full.mean_in_mask_similarity > vanilla.mean_in_mask_similarity:
            wins += 1
    assert wins >= 2


def test_map_sources_coincide_after_alignment(runs):
    config, dataset, result = runs[SEEDS[0], "full"]
    samples = dataset.split(SplitType.TEST)
    cam_gt_loc = result.evaluation.report.gt_loc

    for source in (MapSourceType.NORM, MapSourceType.SIM):
        evaluator = Evaluator(result.model, config.eval_config, map_source=source)
        report = evaluator.evaluate(samples, "test").report
        assert abs(report.gt_loc - cam_gt_loc) <= MAX_MAP_SOURCE_GAP, source


def test_in_box_similarity_mass_grows(runs):
    for seed in SEEDS:
        log = runs[seed, "full"][2].train_log
        assert log.sim_mass_above_half_final > log.sim_mass_above_half_init
