"""Rotation/flip augmentation applied jointly to a target/context pair."""

from __future__ import annotations

import numpy as np
from scipy import ndimage

from .pairs import PatchPair


def _rotate(arr, angle, order):
    """Rotate around the raster center, keeping the original shape.

    Right-angle multiples are applied as exact index permutations; other
    angles interpolate (bilinear for images, nearest for labels) and fill
    uncovered corners with 0, which is both black and the NA zone.
    """
    angle = float(angle) % 360.0
    quarter, remainder = divmod(angle, 90.0)
    if remainder == 0.0:
        return np.ascontiguousarray(np.rot90(arr, int(quarter)))
    return ndimage.rotate(
        arr, angle, reshape=False, order=order, mode="constant", cval=0, prefilter=False
    )


def transform_pair(pair, angle, flip_horizontal, flip_vertical):
    """Apply one rotation plus optional axis flips to all four rasters."""

    def apply(arr, order):
        out = _rotate(arr, angle, order)
        if flip_horizontal:
            out = out[:, ::-1]
        if flip_vertical:
            out = out[::-1, :]
        return np.ascontiguousarray(out)

    return PatchPair(
        target_image=apply(np.asarray(pair.target_image, dtype=np.float32), order=1),
        target_labels=apply(pair.target_labels, order=0),
        context_image=apply(np.asarray(pair.context_image, dtype=np.float32), order=1),
        context_labels=apply(pair.context_labels, order=0),
        origin=pair.origin,
        meters_per_pixel=pair.meters_per_pixel,
    )


def augment_pair(pair, seed):
    """Seeded random rotation in [0, 360) plus independent 50% flips."""
    rng = np.random.default_rng(seed)
    angle = float(rng.uniform(0.0, 360.0))
    flip_horizontal = bool(rng.random() < 0.5)
    flip_vertical = bool(rng.random() < 0.5)
    return transform_pair(pair, angle, flip_horizontal, flip_vertical)
