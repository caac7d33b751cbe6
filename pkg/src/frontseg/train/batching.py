"""Raster-to-tensor conversion shared by training and inference."""

from __future__ import annotations

import numpy as np
import torch


def image_to_input(image):
    """Map 8-bit intensities to [-1, 1] and replicate to three channels."""
    arr = np.asarray(image, dtype=np.float32) / 127.5 - 1.0
    return np.repeat(arr[None, :, :], 3, axis=0)


def batch_from_pairs(pairs, device="cpu"):
    """Stack PatchPairs into model-ready tensors.

    Returns (target_images, context_images, target_labels, context_labels).
    """
    target = torch.from_numpy(
        np.stack([image_to_input(p.target_image) for p in pairs])
    ).to(device)
    context = torch.from_numpy(
        np.stack([image_to_input(p.context_image) for p in pairs])
    ).to(device)
    target_labels = torch.from_numpy(
        np.stack([np.asarray(p.target_labels, dtype=np.int64) for p in pairs])
    ).to(device)
    context_labels = torch.from_numpy(
        np.stack([np.asarray(p.context_labels, dtype=np.int64) for p in pairs])
    ).to(device)
    return target, context, target_labels, context_labels
