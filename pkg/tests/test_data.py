import json
from dataclasses import replace

import numpy as np
import pytest

from fdalign.config import DatasetConfig
from fdalign.data import (
    DatasetSpec,
    SyntheticDatasetGenerator,
    boxes_from_mask,
    generate,
    load_dataset,
    run_marker_probe,
    save_dataset,
)
from fdalign.data.dataset_io import index_path
from fdalign.entities import Box
from fdalign.errors import DatasetError, DatasetExistsError, DatasetGenerationError
from fdalign.types import SplitType


def test_boxes_from_mask():
    mask = np.zeros((10, 10), dtype=bool)
    mask[1:3, 2:6] = True
    mask[6:9, 7] = True
    mask[4, 4] = True
    mask[5, 5] = True
    boxes = sorted(boxes_from_mask(mask), key=lambda b: (b.y0, b.x0))
    assert boxes == [Box(2, 1, 6, 3), Box(4, 4, 6, 6), Box(7, 6, 8, 9)]


class TestGenerator:
    def test_same_seed_same_dataset(self, small_dataset_config):
        spec = DatasetSpec.from_config(small_dataset_config, seed=11)
        assert generate(spec) == generate(spec)

    def test_other_seed_other_dataset(self, small_dataset_config):
        a = generate(DatasetSpec.from_config(small_dataset_config, seed=11))
        b = generate(DatasetSpec.from_config(small_dataset_config, seed=12))
        assert a != b

    def test_splits_are_independent(self, small_dataset_config):
        base = DatasetSpec.from_config(small_dataset_config, seed=11)
        more_train = replace(
            base, images_per_class={**base.images_per_class, "train": 9}
        )
        a = generate(base).split(SplitType.TEST)
        b = generate(more_train).split(SplitType.TEST)
        assert a == b

    def test_split_sizes(self, small_dataset):
        assert len(small_dataset.split(SplitType.TRAIN)) == 12
        assert len(small_dataset.split(SplitType.VAL)) == 6
        assert len(small_dataset.split(SplitType.TEST)) == 6

    def test_sample_invariants(self, small_dataset):
        for sample in small_dataset:
            assert sample.pixels.shape == (32, 32, 3)
            assert sample.image.min() >= 0.0 and sample.image.max() <= 1.0
            assert sample.label == sample.index % 3
            assert sample.gt_mask.any()
            assert sample.gt_boxes == boxes_from_mask(sample.gt_mask)
            for box in sample.gt_boxes:
                assert box.within(32, 32)
            marker = sample.marker_box
            assert sample.gt_mask[marker.y0 : marker.y1, marker.x0 : marker.x1].all()

    def test_multi_object(self, small_dataset_config):
        config = replace(small_dataset_config, image_size=64, multi_object=True, max_objects=3)
        dataset = generate(DatasetSpec.from_config(config, seed=3))
        counts = [len(sample.gt_boxes) for sample in dataset]
        assert min(counts) >= 1 and max(counts) <= 3
        assert max(counts) > 1

    def test_impossible_placement(self, small_dataset_config):
        spec = replace(
            DatasetSpec.from_config(small_dataset_config, seed=0),
            image_size=16,
            marker_size=3,
            min_body_fraction=0.9,
            max_body_fraction=0.95,
            placement_retries=5,
        )
        with pytest.raises(DatasetGenerationError):
            SyntheticDatasetGenerator(spec).generate_sample(SplitType.TRAIN, 0)

    @pytest.mark.parametrize("low,high", [(0.5, 0.4), (0.0, 0.5), (0.3, 1.0)])
    def test_invalid_body_fraction_band(self, small_dataset_config, low, high):
        spec = DatasetSpec.from_config(small_dataset_config, seed=0)
        with pytest.raises(DatasetGenerationError, match="body_fraction"):
            replace(spec, min_body_fraction=low, max_body_fraction=high)


class TestDatasetIO:
    def test_round_trip(self, small_dataset, tmp_path):
        save_dataset(small_dataset, str(tmp_path))
        assert load_dataset(str(tmp_path)) == small_dataset

    def test_existing_dataset_needs_force(self, small_dataset, tmp_path):
        save_dataset(small_dataset, str(tmp_path))
        with pytest.raises(DatasetExistsError):
            save_dataset(small_dataset, str(tmp_path))
        save_dataset(small_dataset, str(tmp_path), force=True)

    def test_index_boxes_match_masks(self, small_dataset, tmp_path):
        save_dataset(small_dataset, str(tmp_path))
        with open(index_path(str(tmp_path))) as f:
            records = json.load(f)["records"]
        assert len(records) == len(small_dataset)
        loaded = load_dataset(str(tmp_path))
        by_name = {sample.name: sample for sample in loaded}
        for record in records:
            sample = by_name[f"{record['split']}_{record['index']:05d}"]
            recomputed = [box.to_list() for box in boxes_from_mask(sample.gt_mask)]
            assert record["boxes"] == recomputed

    def test_truncated_image(self, small_dataset, tmp_path):
        save_dataset(small_dataset, str(tmp_path))
        target = tmp_path / "images" / "train_00000.ppm"
        target.write_bytes(target.read_bytes()[:100])
        with pytest.raises(DatasetError):
            load_dataset(str(tmp_path))

    def test_missing_index(self, tmp_path):
        with pytest.raises(DatasetError):
            load_dataset(str(tmp_path))

    def test_count_mismatch(self, small_dataset, tmp_path):
        save_dataset(small_dataset, str(tmp_path))
        path = index_path(str(tmp_path))
        with open(path) as f:
            index = json.load(f)
        index["records"] = index["records"][1:]
        with open(path, "w") as f:
            json.dump(index, f)
        with pytest.raises(DatasetError):
            load_dataset(str(tmp_path))


def test_marker_probe_finds_the_discriminative_part():
    config = DatasetConfig(train_per_class=20, val_per_class=0, test_per_class=10)
    dataset = generate(DatasetSpec.from_config(config, seed=5))
    report = run_marker_probe(dataset, seed=0)
    assert report.accuracy > 0.9
    assert report.max_coverage < 0.05
    assert report.passed
