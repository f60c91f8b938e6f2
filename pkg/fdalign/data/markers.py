from functools import lru_cache

import numpy as np

from fdalign.errors import DatasetGenerationError

# glyphs are a fixed alphabet, independent of the dataset seed
_GLYPH_ENTROPY = 20240917
_MIN_FILL = 0.4
_MAX_FILL = 0.7


@lru_cache(maxsize=None)
def _glyph_alphabet(num_glyphs: int, size: int) -> np.ndarray:
    rng = np.random.default_rng(_GLYPH_ENTROPY + size)
    min_distance = max(2, size * size // 4)
    glyphs = []
    for _ in range(100000):
        if len(glyphs) == num_glyphs:
            break
        candidate = rng.random((size, size)) < 0.55
        fill = candidate.mean()
        if not _MIN_FILL <= fill <= _MAX_FILL:
            continue
        if any((candidate != g).sum() < min_distance for g in glyphs):
            continue
        glyphs.append(candidate)
    if len(glyphs) < num_glyphs:
        raise DatasetGenerationError(f"cannot build {num_glyphs} distinct {size}x{size} glyphs")
    result = np.stack(glyphs)
    result.flags.writeable = False
    return result


def marker_glyphs(num_classes: int, size: int) -> np.ndarray:
    """[num_classes, size, size] boolean glyphs, pairwise far apart."""
    return _glyph_alphabet(num_classes, size)


def marker_color(body_luminance: float) -> float:
    return 0.05 if body_luminance > 0.5 else 0.95


def luminance(rgb) -> np.ndarray:
    rgb = np.asarray(rgb, dtype=np.float64)
    return rgb @ np.array([0.299, 0.587, 0.114])
