from fdalign.evaluation.box_metrics import (
    box_accuracy,
    iou_grid,
    maxboxaccv2,
    tau_grid,
    top_k_gt_loc,
)
from fdalign.evaluation.boxes import extract_boxes, iou, normalize_map, upsample_bilinear
from fdalign.evaluation.evaluator import EvaluationResult, Evaluator, SplitPredictions
from fdalign.evaluation.histograms import (
    RegionHistograms,
    accumulate_histograms,
    in_box_sim_mass_above,
    region_histograms,
)
from fdalign.evaluation.map_source_registry import MapSourceRegistry
from fdalign.evaluation.pxap import pxap

__all__ = [
    EvaluationResult,
    Evaluator,
    MapSourceRegistry,
    RegionHistograms,
    SplitPredictions,
    accumulate_histograms,
    box_accuracy,
    extract_boxes,
    in_box_sim_mass_above,
    iou,
    iou_grid,
    maxboxaccv2,
    normalize_map,
    pxap,
    region_histograms,
    tau_grid,
    top_k_gt_loc,
    upsample_bilinear,
]
