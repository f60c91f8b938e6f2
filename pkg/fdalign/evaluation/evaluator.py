from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from fdalign.cam import decompose
from fdalign.config import EvalConfig
from fdalign.entities import DecompositionMaps, EvalReport, LocalizationSample, SweepCurve
from fdalign.errors import InvalidArgumentError
from fdalign.evaluation.box_metrics import (
    best_threshold,
    iou_grid,
    maxboxaccv2_from_grid,
    tau_grid,
    top_k_gt_loc,
    top_k_hits,
)
from fdalign.evaluation.boxes import normalize_map, upsample_bilinear
from fdalign.evaluation.histograms import RegionHistograms, accumulate_histograms
from fdalign.evaluation.map_source_registry import MapSourceRegistry
from fdalign.evaluation.pxap import pxap
from fdalign.logger import init_logger
from fdalign.model import Model
from fdalign.types import MapSourceType

logger = init_logger(__name__)

TOP5 = 5


@dataclass
class SplitPredictions:
    logits: np.ndarray
    # one decomposition per sample, for its ground-truth class
    decomps: List[DecompositionMaps]


@dataclass
class EvaluationResult:
    report: EvalReport
    sweep: SweepCurve
    histograms: RegionHistograms


def mean_in_mask_similarity(
    samples: Sequence[LocalizationSample], decomps: Sequence[DecompositionMaps]
) -> float:
    means = []
    for sample, decomp in zip(samples, decomps):
        if not sample.gt_mask.any():
            continue
        sim = upsample_bilinear(decomp.sim_map, (sample.height, sample.width))
        means.append(sim[sample.gt_mask].mean())
    return float(np.mean(means)) if means else 0.0


class Evaluator:
    def __init__(
        self,
        model: Model,
        config: EvalConfig,
        map_source: Optional[MapSourceType] = None,
        batch_size: int = 64,
    ) -> None:
        self._model = model
        self._config = config
        self._map_source_type = map_source or config.map_source_type
        self._map_source = MapSourceRegistry.get(self._map_source_type)
        self._batch_size = batch_size

    def predict(self, samples: Sequence[LocalizationSample]) -> SplitPredictions:
        head = self._model.head_weight.data
        logits, decomps = [], []
        for start in range(0, len(samples), self._batch_size):
            batch = samples[start : start + self._batch_size]
            bundle = self._model.forward(np.stack([sample.chw for sample in batch]))
            logits.append(bundle.logits.data)
            for sample, f_map in zip(batch, bundle.f_map.data):
                decomps.append(decompose(f_map, head[sample.label], sample.label))
        num_classes = head.shape[0]
        return SplitPredictions(
            logits=np.concatenate(logits) if logits else np.zeros((0, num_classes)),
            decomps=decomps,
        )

    def score_maps(
        self, samples: Sequence[LocalizationSample], predictions: SplitPredictions
    ) -> List[np.ndarray]:
        """Localization maps at image resolution, before normalization."""
        return [
            upsample_bilinear(
                self._map_source.score_map(decomp), (sample.height, sample.width)
            )
            for sample, decomp in zip(samples, predictions.decomps)
        ]

    def validation_gt_loc(self, samples: Sequence[LocalizationSample]) -> float:
        if not samples:
            return 0.0
        maps = self.score_maps(samples, self.predict(samples))
        thresholds = self._thresholds(self._config.validation_tau_grid_size)
        largest, _ = iou_grid(
            samples,
            maps,
            thresholds,
            self._map_source.normalization,
            self._config.connectivity,
        )
        _, accuracy = best_threshold(largest, thresholds, self._config.iou_threshold)
        return accuracy

    def _thresholds(self, grid_size: int) -> np.ndarray:
        if self._config.box_threshold is not None:
            return np.array([self._config.box_threshold])
        return tau_grid(grid_size)

    def evaluate(
        self, samples: Sequence[LocalizationSample], split: str
    ) -> EvaluationResult:
        if not samples:
            raise InvalidArgumentError(f"split {split} has no samples to evaluate")
        config = self._config
        normalization = self._map_source.normalization
        predictions = self.predict(samples)
        maps = self.score_maps(samples, predictions)
        labels = [sample.label for sample in samples]
        num_classes = predictions.logits.shape[1]

        thresholds = tau_grid(config.tau_grid_size)
        largest, any_box = iou_grid(
            samples, maps, thresholds, normalization, config.connectivity
        )
        per_delta, mean, sweep = maxboxaccv2_from_grid(any_box, thresholds, config.deltas)

        if config.box_threshold is None:
            box_threshold, _ = best_threshold(largest, thresholds, config.iou_threshold)
        else:
            box_threshold = config.box_threshold

        top1_loc, gt_loc = top_k_gt_loc(
            samples,
            maps,
            predictions.logits,
            1,
            config.iou_threshold,
            box_threshold,
            normalization,
            config.connectivity,
        )
        top5_loc = top5_cls = None
        if num_classes > TOP5:
            top5_loc, _ = top_k_gt_loc(
                samples,
                maps,
                predictions.logits,
                TOP5,
                config.iou_threshold,
                box_threshold,
                normalization,
                config.connectivity,
            )
            top5_cls = float(top_k_hits(predictions.logits, labels, TOP5).mean())

        pixel_ap = None
        if config.compute_pxap:
            pixel_ap = pxap(
                [normalize_map(score_map, normalization) for score_map in maps],
                [sample.gt_mask for sample in samples],
            )

        report = EvalReport(
            top1_loc=top1_loc,
            top5_loc=top5_loc,
            gt_loc=gt_loc,
            maxboxaccv2_per_delta={f"{delta:g}": score for delta, score in per_delta.items()},
            maxboxaccv2_mean=mean,
            pxap=pixel_ap,
            top1_cls=float(top_k_hits(predictions.logits, labels, 1).mean()),
            top5_cls=top5_cls,
            box_threshold=float(box_threshold),
            map_source=str(self._map_source_type),
            split=split,
            num_images=len(samples),
            mean_in_mask_similarity=mean_in_mask_similarity(samples, predictions.decomps),
        )
        histograms = accumulate_histograms(
            predictions.decomps, samples, config.histogram_bins
        )
        logger.info(
            f"Eval {split} ({report.map_source}): GT Loc {report.gt_loc:.4f},"
            f" Top-1 Loc {report.top1_loc:.4f}, MaxBoxAccV2 {report.maxboxaccv2_mean:.4f},"
            f" PxAP {report.pxap if report.pxap is not None else float('nan'):.4f},"
            f" Top-1 Cls {report.top1_cls:.4f}"
        )
        return EvaluationResult(report=report, sweep=sweep, histograms=histograms)
