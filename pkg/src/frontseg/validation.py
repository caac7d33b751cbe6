"""Input validation helpers shared across the package."""

from __future__ import annotations

import numpy as np

NUM_CLASSES = 4
ZONE_NA = 0
ZONE_ROCK = 1
ZONE_GLACIER = 2
ZONE_OCEAN = 3

ZONE_NAMES = {
    ZONE_NA: "na",
    ZONE_ROCK: "rock",
    ZONE_GLACIER: "glacier",
    ZONE_OCEAN: "ocean",
}

SEASONS = ("summer", "winter")


def check_raster(arr, name="raster"):
    """Require a 2-D numpy array."""
    arr = np.asarray(arr)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    return arr


def check_zonemap(arr, name="zones"):
    """Require a 2-D class raster with values in {0,1,2,3}."""
    arr = check_raster(arr, name)
    values = np.unique(arr)
    if values.size and (values.min() < 0 or values.max() >= NUM_CLASSES):
        bad = [int(v) for v in values if v < 0 or v >= NUM_CLASSES]
        raise ValueError(f"{name} contains classes outside {{0..3}}: {bad}")
    return arr


def check_same_shape(a, b, name_a="a", name_b="b"):
    a, b = np.asarray(a), np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"{name_a} shape {a.shape} != {name_b} shape {b.shape}")


def check_positive(value, name):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def check_in(value, allowed, name):
    if value not in allowed:
        raise ValueError(f"{name} must be one of {sorted(allowed)}, got {value!r}")
    return value
