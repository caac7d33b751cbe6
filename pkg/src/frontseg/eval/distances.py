"""Front-to-front distance metrics: mean distance error and Hausdorff family.

All metrics consume (prediction, ground truth) FrontSet pairs.  Images whose
predicted front is empty must be filtered out beforehand (they are tallied
separately as the no-front count); an empty pair list yields None.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import distance_transform_edt


def nearest_distances(from_points, to_points):
    """Euclidean distance from each of ``from_points`` to the nearest of
    ``to_points``, in pixels.

    Computed with an exact Euclidean distance transform on the joint
    bounding grid, which the integer pixel coordinates make exact.
    """
    from_points = np.asarray(from_points, dtype=np.int64).reshape(-1, 2)
    to_points = np.asarray(to_points, dtype=np.int64).reshape(-1, 2)
    if from_points.size == 0:
        return np.zeros(0, dtype=np.float64)
    if to_points.size == 0:
        raise ValueError("cannot measure distances to an empty point set")

    offset = np.minimum(from_points.min(axis=0), to_points.min(axis=0))
    extent = np.maximum(from_points.max(axis=0), to_points.max(axis=0)) - offset + 1
    grid = np.ones(tuple(extent), dtype=bool)
    shifted_to = to_points - offset
    grid[shifted_to[:, 0], shifted_to[:, 1]] = False
    edt = distance_transform_edt(grid)
    shifted_from = from_points - offset
    return np.asarray(edt[shifted_from[:, 0], shifted_from[:, 1]], dtype=np.float64)


@dataclass(frozen=True)
class PairDistances:
    """Directed nearest-neighbor distances of one (P, Q) pair, in meters."""

    p_to_q: np.ndarray
    q_to_p: np.ndarray

    @property
    def sum_meters(self):
        return float(self.p_to_q.sum() + self.q_to_p.sum())

    @property
    def count(self):
        return int(self.p_to_q.size + self.q_to_p.size)


def _pair_distances(p, q):
    if len(p) == 0 or len(q) == 0:
        raise ValueError("mde/hd95 pairs must both be nonempty; filter empties first")
    if not np.isclose(p.meters_per_pixel, q.meters_per_pixel):
        raise ValueError(
            f"meters_per_pixel mismatch within pair: {p.meters_per_pixel} vs {q.meters_per_pixel}"
        )
    p_arr, q_arr = p.to_array(), q.to_array()
    mpp = p.meters_per_pixel
    return PairDistances(
        p_to_q=nearest_distances(p_arr, q_arr) * mpp,
        q_to_p=nearest_distances(q_arr, p_arr) * mpp,
    )


def mde(pairs):
    """Mean distance error in meters, pooled globally over all pairs.

    Sum of both directed nearest-distance sums over every image, divided by
    the total number of contributing points; per-image resolutions are
    applied before pooling.  Not the mean of per-image means.
    """
    total, count = 0.0, 0
    for p, q in pairs:
        dists = _pair_distances(p, q)
        total += dists.sum_meters
        count += dists.count
    if count == 0:
        return None
    return total / count


def hd95(pairs, pooled=False):
    """95th-percentile Hausdorff distance in meters.

    Per image: the larger of the two directed 95th percentiles (linear
    interpolation).  Returns the mean over images.  With ``pooled=True``
    the directed distances of all images form one multiset and a single
    percentile is returned instead.
    """
    return _hausdorff(pairs, percentile=95.0, pooled=pooled)


def hausdorff(pairs, pooled=False):
    """Exact Hausdorff distance in meters (the maximum, no trimming)."""
    return _hausdorff(pairs, percentile=100.0, pooled=pooled)


def _directed_reduce(values, percentile):
    if percentile >= 100.0:
        return float(values.max())
    return float(np.percentile(values, percentile))


def _hausdorff(pairs, percentile, pooled):
    per_image = []
    pool = []
    for p, q in pairs:
        dists = _pair_distances(p, q)
        if pooled:
            pool.append(dists.p_to_q)
            pool.append(dists.q_to_p)
        else:
            per_image.append(
                max(
                    _directed_reduce(dists.p_to_q, percentile),
                    _directed_reduce(dists.q_to_p, percentile),
                )
            )
    if pooled:
        if not pool:
            return None
        return _directed_reduce(np.concatenate(pool), percentile)
    if not per_image:
        return None
    return float(np.mean(per_image))
