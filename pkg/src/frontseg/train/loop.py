"""Seeded SGD training loop with per-epoch validation and checkpointing."""

from __future__ import annotations

import csv
import json
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..data import augment_pair, pairs_from_scene
from ..losses import total_loss
from ..model import TwoBranchNet, network_config_to_dict, save_checkpoint
from .batching import batch_from_pairs
from .inference import validation_macro_iou


@dataclass
class EpochStats:
    epoch: int
    lr: float
    loss_total: float
    loss_target: float
    loss_context: float
    loss_supervision: float
    val_macro_iou: float


@dataclass
class RunRecord:
    config: dict
    epochs: list = field(default_factory=list)
    best_epoch: int = -1
    best_val_macro_iou: float = float("-inf")
    best_checkpoint: str = ""
    final_checkpoint: str = ""
    steps: int = 0
    num_train_scenes: int = 0
    num_val_scenes: int = 0
    wall_clock_s: float = 0.0

    def to_dict(self):
        return asdict(self)

    def save(self, path):
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))


def load_run_record(path):
    data = json.loads(Path(path).read_text())
    data["epochs"] = [EpochStats(**e) for e in data["epochs"]]
    record = RunRecord(**{k: v for k, v in data.items() if k != "epochs"})
    record.epochs = data["epochs"]
    return record


def split_validation(scenes, val_fraction, seed):
    """Seeded shuffle split into (train, validation) scene lists."""
    order = np.random.default_rng(seed).permutation(len(scenes))
    n_val = int(round(val_fraction * len(scenes)))
    if val_fraction > 0:
        n_val = max(n_val, 1)
    if n_val >= len(scenes):
        raise ValueError(f"validation split would consume all {len(scenes)} scenes")
    val_idx = set(order[:n_val].tolist())
    train = [scenes[i] for i in range(len(scenes)) if i not in val_idx]
    val = [scenes[i] for i in sorted(val_idx)]
    return train, val


def seed_everything(seed, num_threads=1):
    torch.manual_seed(seed)
    np.random.seed(seed % 2**32)
    if num_threads:
        torch.set_num_threads(num_threads)
    torch.use_deterministic_algorithms(True)


def train(config, scenes, val_scenes=None, run_dir=None, quiet=False):
    """Train a model on full scenes; returns (net, RunRecord).

    Scenes are tiled into target/context pairs once; each epoch reshuffles
    pair order and re-augments with seeds derived from (seed, epoch, pair),
    so the whole run is a pure function of (config, scenes).
    """
    start = time.perf_counter()
    seed_everything(config.seed, config.num_threads)

    if val_scenes is None:
        scenes, val_scenes = split_validation(scenes, config.val_fraction, config.seed)

    net_cfg = config.network_config()
    net = TwoBranchNet(net_cfg)
    optimizer = torch.optim.SGD(
        net.parameters(),
        lr=config.lr0,
        momentum=config.momentum,
        weight_decay=config.weight_decay,
    )

    base_pairs = []
    for scene in scenes:
        _, pairs = pairs_from_scene(scene, net_cfg.input_size)
        base_pairs.extend(pairs)
    if not base_pairs:
        raise ValueError("no training pairs; check scene sizes against the model scale")

    run_dir = Path(run_dir) if run_dir else None
    log_writer = None
    log_file = None
    if run_dir:
        run_dir.mkdir(parents=True, exist_ok=True)
        (run_dir / "checkpoints").mkdir(exist_ok=True)
        log_file = open(run_dir / "train_log.csv", "w", newline="")
        log_writer = csv.writer(log_file)
        log_writer.writerow(("step", "loss_target", "loss_context", "loss_cds", "total", "lr"))

    record = RunRecord(
        config=config.to_dict(),
        num_train_scenes=len(scenes),
        num_val_scenes=len(val_scenes),
    )
    weights = config.loss_weights()
    shuffler = np.random.default_rng(np.random.SeedSequence([config.seed, 0xA5]))
    step = 0

    try:
        for epoch in range(config.epochs):
            lr = config.learning_rate(epoch)
            for group in optimizer.param_groups:
                group["lr"] = lr

            net.train()
            order = shuffler.permutation(len(base_pairs))
            sums = np.zeros(4)
            batches = 0
            for lo in range(0, len(order), config.batch_size):
                idx = order[lo : lo + config.batch_size]
                batch = [
                    augment_pair(
                        base_pairs[i],
                        np.random.SeedSequence([config.seed, epoch, int(i)]),
                    )
                    for i in idx
                ]
                target, context, y_t, y_c = batch_from_pairs(batch)
                output = net(target, None if net.context is None else context)
                breakdown = total_loss(
                    output.target_logits,
                    y_t,
                    output.context_logits,
                    None if output.context_logits is None else y_c,
                    fused_features=output.fused,
                    supervision_heads=net.supervision_heads,
                    supervision=net_cfg.supervision,
                    weights=weights,
                    seed=config.seed * 1_000_003 + step,
                )
                if not torch.isfinite(breakdown.total):
                    raise RuntimeError(
                        f"non-finite loss {float(breakdown.total.detach())!r} at step {step} "
                        f"(epoch {epoch})"
                    )
                optimizer.zero_grad()
                breakdown.total.backward()
                optimizer.step()

                parts = breakdown.components()
                if log_writer:
                    log_writer.writerow(
                        (
                            step,
                            f"{parts['target']:.6f}",
                            f"{parts['context']:.6f}",
                            f"{parts['supervision']:.6f}",
                            f"{parts['total']:.6f}",
                            f"{lr:.8f}",
                        )
                    )
                sums += (parts["target"], parts["context"], parts["supervision"], parts["total"])
                batches += 1
                step += 1

            val_iou = validation_macro_iou(net, val_scenes, config.batch_size)
            stats = EpochStats(
                epoch=epoch,
                lr=lr,
                loss_total=sums[3] / batches,
                loss_target=sums[0] / batches,
                loss_context=sums[1] / batches,
                loss_supervision=sums[2] / batches,
                val_macro_iou=val_iou,
            )
            record.epochs.append(stats)
            if not quiet:
                print(
                    f"epoch {epoch:3d}  lr {lr:.5f}  loss {stats.loss_total:.4f}  "
                    f"val iou {val_iou:.4f}",
                    flush=True,
                )

            if run_dir:
                ckpt_path = run_dir / "checkpoints" / f"epoch_{epoch:03d}.ckpt"
                save_checkpoint(
                    ckpt_path,
                    net.state_dict(),
                    {
                        "network": network_config_to_dict(net_cfg),
                        "train": config.to_dict(),
                        "epoch": epoch,
                    },
                )
                record.final_checkpoint = str(ckpt_path)
                if val_iou > record.best_val_macro_iou:
                    record.best_checkpoint = str(ckpt_path)
            if val_iou > record.best_val_macro_iou:
                record.best_val_macro_iou = val_iou
                record.best_epoch = epoch
    finally:
        if log_file:
            log_file.close()

    record.steps = step
    record.wall_clock_s = time.perf_counter() - start
    if run_dir:
        record.save(run_dir / "run.json")
    return net, record
