from fdalign.data.dataset import Dataset
from fdalign.data.dataset_io import load_dataset, save_dataset
from fdalign.data.dataset_spec import DatasetSpec
from fdalign.data.generator import SyntheticDatasetGenerator, boxes_from_mask, generate
from fdalign.data.marker_probe import MarkerProbeReport, run_marker_probe

__all__ = [
    Dataset,
    DatasetSpec,
    MarkerProbeReport,
    SyntheticDatasetGenerator,
    boxes_from_mask,
    generate,
    load_dataset,
    run_marker_probe,
    save_dataset,
]
