"""Target/context patch extraction, scene tiling, and prediction stitching.

Each training sample pairs a high-resolution target window with a context
window covering twice the spatial extent, centered on the same point and
downsampled by two so both rasters share the target's pixel grid size.
Scenes are mirror-padded by half a window so context windows anchored at
any valid target origin stay in bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..validation import check_positive


@dataclass(frozen=True)
class PatchPair:
    """Aligned target/context crops; images float32, labels uint8."""

    target_image: np.ndarray
    target_labels: np.ndarray
    context_image: np.ndarray
    context_labels: np.ndarray
    origin: tuple
    meters_per_pixel: float

    def __post_init__(self):
        r = self.target_image.shape[0]
        for name in ("target_image", "target_labels", "context_image", "context_labels"):
            arr = getattr(self, name)
            if arr.shape != (r, r):
                raise ValueError(f"{name} must be {(r, r)}, got {arr.shape}")


def block_mean_2x2(arr):
    """Average non-overlapping 2x2 blocks; requires even side lengths."""
    h, w = arr.shape
    if h % 2 or w % 2:
        raise ValueError(f"block averaging needs even sides, got {(h, w)}")
    out = np.asarray(arr, dtype=np.float64).reshape(h // 2, 2, w // 2, 2).mean(axis=(1, 3))
    return out.astype(np.float32)


def subsample_labels_2x2(labels):
    """Keep the top-left pixel of each 2x2 block."""
    return np.ascontiguousarray(labels[0::2, 0::2])


def _scene_shape(scene):
    shape = getattr(scene, "shape", scene)
    h, w = shape
    return int(h), int(w)


def _check_patch_size(scene, patch_size):
    check_positive(patch_size, "patch_size")
    if patch_size % 2:
        raise ValueError(f"patch_size must be even, got {patch_size}")
    h, w = _scene_shape(scene)
    if h < patch_size or w < patch_size:
        raise ValueError(f"scene {(h, w)} smaller than patch size {patch_size}")


def make_pair(scene, origin, patch_size):
    """Cut the target window at ``origin`` and its 2x extent context window.

    ``origin`` is the (row, col) of the target window's top-left corner in
    scene coordinates and must keep the target window inside the scene.
    """
    _check_patch_size(scene, patch_size)
    row, col = int(origin[0]), int(origin[1])
    h, w = scene.shape
    if not (0 <= row <= h - patch_size and 0 <= col <= w - patch_size):
        raise ValueError(
            f"origin {origin} places a {patch_size}px window outside scene {scene.shape}"
        )

    target_image = np.asarray(
        scene.image[row : row + patch_size, col : col + patch_size], dtype=np.float32
    )
    target_labels = np.asarray(
        scene.zones[row : row + patch_size, col : col + patch_size], dtype=np.uint8
    )

    # With pad = patch_size/2 the context window's top-left in padded
    # coordinates coincides with the target origin.
    pad = patch_size // 2
    padded_image = np.pad(scene.image, pad, mode="reflect")
    padded_zones = np.pad(scene.zones, pad, mode="reflect")
    ctx_image = padded_image[row : row + 2 * patch_size, col : col + 2 * patch_size]
    ctx_zones = padded_zones[row : row + 2 * patch_size, col : col + 2 * patch_size]

    return PatchPair(
        target_image=target_image,
        target_labels=target_labels,
        context_image=block_mean_2x2(ctx_image),
        context_labels=subsample_labels_2x2(np.asarray(ctx_zones, dtype=np.uint8)),
        origin=(row, col),
        meters_per_pixel=scene.meters_per_pixel,
    )


@dataclass(frozen=True)
class TileLayout:
    """Window origins covering a scene, in write order for stitching."""

    scene_shape: tuple
    patch_size: int
    origins: tuple


def _axis_positions(extent, patch_size):
    positions = list(range(0, extent - patch_size + 1, patch_size))
    if positions[-1] + patch_size < extent:
        positions.append(extent - patch_size)
    return positions

def tile_scene(scene, patch_size):
    """Non-overlapping grid of windows plus flush final windows per axis.

    ``scene`` may be a Scene or a plain (height, width) tuple.  Interior
    windows advance by a full stride; when the extent is not a multiple of
    the window the last window per axis is anchored flush with the border,
    overlapping its predecessor.
    """
    _check_patch_size(scene, patch_size)
    h, w = _scene_shape(scene)
    origins = tuple(
        (r, c)
        for r in _axis_positions(h, patch_size)
        for c in _axis_positions(w, patch_size)
    )
    return TileLayout(scene_shape=(h, w), patch_size=patch_size, origins=origins)


def pairs_from_scene(scene, patch_size):
    """Tile a scene and cut the pair at every window: (layout, pairs)."""
    layout = tile_scene(scene, patch_size)
    return layout, [make_pair(scene, origin, patch_size) for origin in layout.origins]


def stitch(layout, patches):
    """Reassemble per-window rasters into a scene raster, last write wins."""
    patches = list(patches)
    if len(patches) != len(layout.origins):
        raise ValueError(
            f"layout has {len(layout.origins)} windows but got {len(patches)} patches"
        )
    r = layout.patch_size
    out = None
    for (row, col), patch in zip(layout.origins, patches):
        patch = np.asarray(patch)
        if patch.shape != (r, r):
            raise ValueError(f"patch at {(row, col)} has shape {patch.shape}, expected {(r, r)}")
        if out is None:
            out = np.zeros(layout.scene_shape, dtype=patch.dtype)
        out[row : row + r, col : col + r] = patch
    return out
