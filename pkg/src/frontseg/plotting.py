"""PNG plot emission: loss curves, ablation bars, and front overlays."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

ZONE_COLORS = np.array(
    [
        [0, 0, 0],  # NA
        [120, 80, 40],  # rock
        [220, 220, 235],  # glacier
        [40, 90, 160],  # ocean
    ],
    dtype=np.uint8,
)


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=110)
    plt.close(fig)
    return path


def plot_loss_curves(run_record, path):
    """Per-epoch loss components and validation IoU from a RunRecord."""
    epochs = [e.epoch if hasattr(e, "epoch") else e["epoch"] for e in run_record.epochs]

    def series(name):
        return [getattr(e, name) if hasattr(e, name) else e[name] for e in run_record.epochs]

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    for name, label in (
        ("loss_total", "total"),
        ("loss_target", "target"),
        ("loss_context", "context"),
        ("loss_supervision", "supervision"),
    ):
        ax1.plot(epochs, series(name), label=label)
    ax1.set_xlabel("epoch")
    ax1.set_ylabel("loss")
    ax1.legend()
    ax1.set_title("training loss components")

    ax2.plot(epochs, series("val_macro_iou"), color="tab:green")
    ax2.set_xlabel("epoch")
    ax2.set_ylabel("val macro IoU")
    ax2.set_ylim(0, 1)
    ax2.set_title("validation")
    fig.tight_layout()
    return _save(fig, path)


def plot_step_log(log_csv, path):
    """Loss curves from a per-step train_log.csv."""
    steps, totals = [], []
    with open(log_csv, newline="") as fh:
        for row in csv.DictReader(fh):
            steps.append(int(row["step"]))
            totals.append(float(row["total"]))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.plot(steps, totals, linewidth=0.8)
    ax.set_xlabel("step")
    ax.set_ylabel("total loss")
    fig.tight_layout()
    return _save(fig, path)


def plot_ablation(rows, path):
    """Grouped bars of mean IoU (with std whiskers) per ablation arm."""
    labels = [f"{r.hook_type}\n{r.supervision}" for r in rows]
    means, stds = [], []
    for row in rows:
        mean, std = row.stats("val_macro_iou")
        means.append(0.0 if mean is None else mean)
        stds.append(0.0 if std is None else std)
    fig, ax = plt.subplots(figsize=(1.2 * len(rows) + 2, 4))
    ax.bar(range(len(rows)), means, yerr=stds, capsize=4, color="tab:blue")
    ax.set_xticks(range(len(rows)), labels)
    ax.set_ylabel("val macro IoU")
    ax.set_ylim(0, 1)
    fig.tight_layout()
    return _save(fig, path)


def zonemap_to_rgb(zonemap):
    return ZONE_COLORS[np.asarray(zonemap, dtype=np.int64)]


def plot_front_overlay(scene, pred_front, gt_front, path, pred_zones=None):
    """Scene raster with ground-truth (green) and predicted (red) fronts."""
    fig, axes = plt.subplots(1, 2 if pred_zones is not None else 1, figsize=(11, 5.5))
    axes = np.atleast_1d(axes)
    ax = axes[0]
    ax.imshow(np.asarray(scene.image), cmap="gray", interpolation="nearest")
    for front, color, label in ((gt_front, "lime", "truth"), (pred_front, "red", "prediction")):
        coords = front.to_array()
        if coords.size:
            ax.scatter(coords[:, 1], coords[:, 0], s=0.4, c=color, label=label)
    ax.legend(markerscale=12, loc="lower right")
    ax.set_title("calving front")
    ax.set_axis_off()
    if pred_zones is not None:
        axes[1].imshow(zonemap_to_rgb(pred_zones), interpolation="nearest")
        axes[1].set_title("predicted zones")
        axes[1].set_axis_off()
    fig.tight_layout()
    return _save(fig, path)
