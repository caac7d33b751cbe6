"""Ablation harness: train every hook/supervision arm over shared seeds."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..model import load_checkpoint
from .inference import evaluate_scenes, network_from_checkpoint
from .loop import split_validation, train


@dataclass
class ArmResult:
    seed: int
    val_macro_iou: float
    mde_m: float
    hd95_m: float
    no_front_count: int


@dataclass
class AblationRow:
    hook_type: str
    supervision: str
    seeds: tuple
    config: dict
    runs: list = field(default_factory=list)

    def _values(self, attr):
        vals = [getattr(r, attr) for r in self.runs]
        return np.array([np.nan if v is None else v for v in vals], dtype=float)

    def stats(self, attr):
        vals = self._values(attr)
        if np.isnan(vals).all():
            return None, None
        return float(np.nanmean(vals)), float(np.nanstd(vals))


def _evaluate_arm(net, record, val_scenes, batch_size):
    if record.best_checkpoint:
        net = network_from_checkpoint(load_checkpoint(record.best_checkpoint))
    report, _ = evaluate_scenes(net, val_scenes, batch_size=batch_size)
    overall = report.overall
    return ArmResult(
        seed=record.config["seed"],
        val_macro_iou=overall.macro.iou,
        mde_m=overall.mde_m,
        hd95_m=overall.hd95_m,
        no_front_count=overall.no_front_count,
    )


def ablate(
    base_config,
    scenes,
    hook_types=("esca", "sa", "senet", "cbam"),
    supervisions=("ds", "cds"),
    seeds=(0, 1, 2),
    val_scenes=None,
    run_dir=None,
    quiet=True,
):
    """Train every (hook, supervision) arm once per seed and summarize.

    All arms share the same seed set and the same train/validation scenes,
    so rows differ only in their configuration.  Returns a list of rows in
    grid order.
    """
    if len(seeds) < 1:
        raise ValueError("need at least one seed")
    if val_scenes is None:
        scenes, val_scenes = split_validation(
            scenes, base_config.val_fraction, base_config.seed
        )

    run_dir = Path(run_dir) if run_dir else None
    rows = []
    for hook_type in hook_types:
        for supervision in supervisions:
            arm_cfg = dataclasses.replace(
                base_config, hook_type=hook_type, supervision=supervision
            )
            row = AblationRow(
                hook_type=hook_type,
                supervision=supervision,
                seeds=tuple(seeds),
                config=arm_cfg.to_dict(),
            )
            for seed in seeds:
                cfg = dataclasses.replace(arm_cfg, seed=seed)
                arm_dir = (
                    run_dir / f"{hook_type}_{supervision}_seed{seed}" if run_dir else None
                )
                net, record = train(
                    cfg, scenes, val_scenes=val_scenes, run_dir=arm_dir, quiet=quiet
                )
                row.runs.append(
                    _evaluate_arm(net, record, val_scenes, cfg.batch_size)
                )
            rows.append(row)
    if run_dir:
        (run_dir / "ablation.json").write_text(ablation_to_json(rows))
        (run_dir / "ablation.csv").write_text(ablation_to_csv(rows))
        (run_dir / "ablation.txt").write_text(format_ablation_table(rows))
    return rows


def _fmt_pair(mean, std, scale=1.0):
    if mean is None:
        return "n/a"
    return f"{mean * scale:.2f}±{(std or 0.0) * scale:.2f}"


def format_ablation_table(rows):
    """Text table: one row per arm with mean±std of IoU / MDE / HD95."""
    header = ("hook", "supervision", "seeds", "iou", "mde_m", "hd95_m", "no_front")
    table = [header]
    for row in rows:
        table.append(
            (
                row.hook_type,
                row.supervision,
                ",".join(str(s) for s in row.seeds),
                _fmt_pair(*row.stats("val_macro_iou"), scale=100.0),
                _fmt_pair(*row.stats("mde_m")),
                _fmt_pair(*row.stats("hd95_m")),
                f"{sum(r.no_front_count for r in row.runs)}",
            )
        )
    widths = [max(len(str(r[i])) for r in table) for i in range(len(header))]
    lines = []
    for i, r in enumerate(table):
        lines.append("  ".join(str(c).ljust(w) for c, w in zip(r, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def ablation_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        (
            "hook",
            "supervision",
            "seed",
            "val_macro_iou",
            "mde_m",
            "hd95_m",
            "no_front",
        )
    )
    for row in rows:
        for run in row.runs:
            writer.writerow(
                (
                    row.hook_type,
                    row.supervision,
                    run.seed,
                    f"{run.val_macro_iou:.6f}",
                    "" if run.mde_m is None else f"{run.mde_m:.4f}",
                    "" if run.hd95_m is None else f"{run.hd95_m:.4f}",
                    run.no_front_count,
                )
            )
    return buf.getvalue()


def ablation_to_json(rows):
    payload = []
    for row in rows:
        iou = row.stats("val_macro_iou")
        mde = row.stats("mde_m")
        hd = row.stats("hd95_m")
        payload.append(
            {
                "hook_type": row.hook_type,
                "supervision": row.supervision,
                "seeds": list(row.seeds),
                "config": row.config,
                "iou_mean": iou[0],
                "iou_std": iou[1],
                "mde_mean": mde[0],
                "mde_std": mde[1],
                "hd95_mean": hd[0],
                "hd95_std": hd[1],
                "runs": [dataclasses.asdict(r) for r in row.runs],
            }
        )
    return json.dumps(payload, indent=2, sort_keys=True)
