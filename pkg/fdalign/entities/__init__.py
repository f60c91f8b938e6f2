from fdalign.entities.box import Box
from fdalign.entities.decomposition_maps import DecompositionMaps
from fdalign.entities.drop_mask import DropMask
from fdalign.entities.eval_report import EvalReport
from fdalign.entities.forward_bundle import ForwardBundle
from fdalign.entities.localization_sample import LocalizationSample
from fdalign.entities.region_partition import RegionPartition
from fdalign.entities.sweep_curve import SweepCurve

__all__ = [
    Box,
    DecompositionMaps,
    DropMask,
    EvalReport,
    ForwardBundle,
    LocalizationSample,
    RegionPartition,
    SweepCurve,
]
