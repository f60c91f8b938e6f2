from fdalign.cam.decomposition import (
    compute_cam,
    decompose,
    minmax_extrema,
    minmax_normalize,
    norm_map,
    similarity_all_classes,
    similarity_map,
)

__all__ = [
    compute_cam,
    decompose,
    minmax_extrema,
    minmax_normalize,
    norm_map,
    similarity_all_classes,
    similarity_map,
]
