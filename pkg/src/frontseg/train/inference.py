"""Scene-level prediction and evaluation on top of a trained network."""

from __future__ import annotations

import torch

from ..data import pairs_from_scene, stitch
from ..eval import (
    build_report,
    confusion_counts,
    enhance_ocean,
    extract_front,
    image_result,
    scores_from_counts,
)
from ..model import TwoBranchNet, load_into, network_config_from_dict
from .batching import batch_from_pairs


def network_from_checkpoint(checkpoint):
    """Instantiate the network a checkpoint describes and load its weights."""
    net = TwoBranchNet(network_config_from_dict(checkpoint.config["network"]))
    load_into(net, checkpoint)
    net.eval()
    return net


@torch.no_grad()
def predict_zonemap(net, scene, batch_size=8):
    """Tile, run both branches per window, argmax, and stitch (no cleanup)."""
    was_training = net.training
    net.eval()
    patch = net.cfg.input_size
    layout, pairs = pairs_from_scene(scene, patch)
    maps = []
    for start in range(0, len(pairs), batch_size):
        chunk = pairs[start : start + batch_size]
        target, context, _, _ = batch_from_pairs(chunk)
        output = net(target, None if net.context is None else context)
        maps.extend(output.target_logits.argmax(dim=1).to(torch.uint8).numpy())
    if was_training:
        net.train()
    return stitch(layout, maps)


def predict(net, scene, batch_size=8):
    """Full pipeline: stitched zone map, cleaned, plus the extracted front."""
    raw = predict_zonemap(net, scene, batch_size=batch_size)
    cleaned = enhance_ocean(raw)
    front = extract_front(cleaned, scene.meters_per_pixel)
    return cleaned, front


def validation_macro_iou(net, scenes, batch_size=8):
    """Macro IoU over pooled confusion counts of all scenes."""
    counts = None
    for scene in scenes:
        c = confusion_counts(predict_zonemap(net, scene, batch_size), scene.zones)
        counts = c if counts is None else counts + c
    _, macro = scores_from_counts(counts)
    return macro.iou


def evaluate_scenes(net, scenes, batch_size=8, names=None):
    """Predict every scene and aggregate into a grouped metrics report."""
    results = []
    for i, scene in enumerate(scenes):
        name = names[i] if names else f"scene_{i:04d}"
        cleaned, front = predict(net, scene, batch_size=batch_size)
        gt_front = extract_front(enhance_ocean(scene.zones), scene.meters_per_pixel)
        results.append(image_result(name, scene, cleaned, front, gt_front))
    return build_report(results), results
