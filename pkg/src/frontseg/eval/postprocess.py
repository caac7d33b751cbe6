"""Zone map cleanup and calving front extraction."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from ..validation import ZONE_GLACIER, ZONE_OCEAN, check_positive, check_zonemap

# 4-connectivity for both component analysis and boundary tests.
_CROSS = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


def enhance_ocean(zonemap):
    """Keep only the largest 4-connected OCEAN component.

    Pixels of every smaller OCEAN component are relabeled GLACIER, removing
    spurious water pockets inland that would otherwise spawn false fronts.
    Ties go to the component encountered first in scan order. Idempotent.
    """
    zonemap = check_zonemap(zonemap).copy()
    labels, count = ndimage.label(zonemap == ZONE_OCEAN, structure=_CROSS)
    if count <= 1:
        return zonemap
    sizes = np.bincount(labels.ravel())
    sizes[0] = 0
    keep = sizes.argmax()
    zonemap[(labels != 0) & (labels != keep)] = ZONE_GLACIER
    return zonemap


@dataclass(frozen=True)
class FrontSet:
    """Pixel coordinates of a 1-pixel-wide front plus ground resolution."""

    pixels: frozenset
    meters_per_pixel: float

    def __post_init__(self):
        check_positive(self.meters_per_pixel, "meters_per_pixel")

    def __len__(self):
        return len(self.pixels)

    def to_array(self):
        """(N, 2) int array of (row, col) coordinates in sorted order."""
        if not self.pixels:
            return np.zeros((0, 2), dtype=np.int64)
        return np.array(sorted(self.pixels), dtype=np.int64)

    def to_mask(self, shape):
        mask = np.zeros(shape, dtype=bool)
        if self.pixels:
            coords = self.to_array()
            mask[coords[:, 0], coords[:, 1]] = True
        return mask


def extract_front(zonemap, meters_per_pixel):
    """Glacier pixels with at least one 4-adjacent ocean pixel.

    Expects at most one ocean component (run :func:`enhance_ocean` first);
    otherwise every spurious component also contributes front pixels.
    """
    zonemap = check_zonemap(zonemap)
    ocean = zonemap == ZONE_OCEAN
    touches_ocean = ndimage.binary_dilation(ocean, structure=_CROSS)
    front = (zonemap == ZONE_GLACIER) & touches_ocean
    coords = np.argwhere(front)
    return FrontSet(
        pixels=frozenset((int(r), int(c)) for r, c in coords),
        meters_per_pixel=float(meters_per_pixel),
    )
