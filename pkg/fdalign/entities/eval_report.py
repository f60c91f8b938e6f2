from dataclasses import asdict, dataclass
from typing import Dict, Optional


@dataclass
class EvalReport:
    top1_loc: float
    top5_loc: Optional[float]
    gt_loc: float
    maxboxaccv2_per_delta: Dict[str, float]
    maxboxaccv2_mean: float
    pxap: Optional[float]
    top1_cls: float
    top5_cls: Optional[float]
    box_threshold: float
    map_source: str
    split: str
    num_images: int
    mean_in_mask_similarity: float

    def to_dict(self) -> dict:
        return asdict(self)
