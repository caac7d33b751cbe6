"""Command line interface.

Subcommands: gen-data, train, predict, evaluate, ablate, plot.  Training
options come from an optional flat ``key = value`` config file; every key
is also exposed as a ``--key value`` flag that overrides the file.  The
only environment variable consulted is FRONTSEG_DATA_ROOT, the default for
``--data``.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys
import time
from pathlib import Path

from .data import generate_dataset, load_directory, load_scene, save_dataset
from .eval import enhance_ocean, extract_front, format_report, report_to_csv, save_front_csv
from .model import load_checkpoint
from .plotting import (
    plot_ablation,
    plot_front_overlay,
    plot_loss_curves,
    plot_step_log,
)
from .train import (
    TrainConfig,
    ablate,
    apply_overrides,
    evaluate_scenes,
    load_config,
    load_run_record,
    network_from_checkpoint,
    predict,
    save_config,
    train,
)

_CONFIG_FIELDS = [f.name for f in dataclasses.fields(TrainConfig)]


def _add_config_flags(parser):
    parser.add_argument("--config", help="flat key = value config file")
    for name in _CONFIG_FIELDS:
        parser.add_argument(
            f"--{name}", f"--{name.replace('_', '-')}", dest=name, default=None,
            help=f"override config key {name}",
        )


def _resolve_config(args):
    cfg = load_config(args.config) if args.config else TrainConfig()
    overrides = {
        name: getattr(args, name)
        for name in _CONFIG_FIELDS
        if getattr(args, name, None) is not None
    }
    return apply_overrides(cfg, overrides)


def _data_dir(args):
    path = args.data or os.environ.get("FRONTSEG_DATA_ROOT")
    if not path:
        raise SystemExit("no data directory: pass --data or set FRONTSEG_DATA_ROOT")
    return Path(path)


def _run_dir(args, seed):
    if args.run_dir:
        return Path(args.run_dir)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    return Path("runs") / f"{stamp}-seed{seed}"


def _cmd_gen_data(args):
    scenes = generate_dataset(
        args.count, args.seed, size=(args.size, args.size), meters_per_pixel=args.mpp
    )
    save_dataset(scenes, args.out, prefix=args.prefix)
    print(f"wrote {len(scenes)} scenes to {args.out}")


def _cmd_train(args):
    cfg = _resolve_config(args)
    scenes = load_directory(_data_dir(args))
    val_scenes = load_directory(args.val_data) if args.val_data else None
    run_dir = _run_dir(args, cfg.seed)
    run_dir.mkdir(parents=True, exist_ok=True)
    save_config(cfg, run_dir / "config.txt")
    net, record = train(cfg, scenes, val_scenes=val_scenes, run_dir=run_dir, quiet=args.quiet)
    print(
        f"done: best epoch {record.best_epoch} "
        f"(val macro IoU {record.best_val_macro_iou:.4f}); artifacts in {run_dir}"
    )


def _load_net(checkpoint_path):
    return network_from_checkpoint(load_checkpoint(checkpoint_path))


def _cmd_predict(args):
    net = _load_net(args.checkpoint)
    directory = _data_dir(args)
    stems = [args.scene] if args.scene else sorted(
        p.name[: -len("_zones.png")] for p in directory.glob("*_zones.png")
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    from PIL import Image
    import numpy as np

    for stem in stems:
        scene = load_scene(directory, stem)
        zonemap, front = predict(net, scene, batch_size=args.batch_size or 8)
        Image.fromarray(np.asarray(zonemap, dtype=np.uint8), mode="L").save(
            out / f"{stem}_pred_zones.png"
        )
        save_front_csv(front, out / f"{stem}_front.csv")
        if args.overlay:
            gt_front = extract_front(enhance_ocean(scene.zones), scene.meters_per_pixel)
            plot_front_overlay(
                scene, front, gt_front, out / f"{stem}_overlay.png", pred_zones=zonemap
            )
        print(f"{stem}: {len(front)} front pixels")


def _cmd_evaluate(args):
    net = _load_net(args.checkpoint)
    named = load_directory(_data_dir(args), with_names=True)
    stems = [name for name, _ in named]
    report, results = evaluate_scenes(
        net, [scene for _, scene in named], batch_size=args.batch_size or 8, names=stems
    )
    text = format_report(report)
    print(text)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "report.txt").write_text(text + "\n")
        (out / "report.csv").write_text(report_to_csv(report, results))
        print(f"report written to {out}")


def _cmd_ablate(args):
    cfg = _resolve_config(args)
    scenes = load_directory(_data_dir(args))
    val_scenes = load_directory(args.val_data) if args.val_data else None
    run_dir = _run_dir(args, cfg.seed)
    rows = ablate(
        cfg,
        scenes,
        hook_types=tuple(args.hooks.split(",")),
        supervisions=tuple(args.supervisions.split(",")),
        seeds=tuple(int(s) for s in args.seeds.split(",")),
        val_scenes=val_scenes,
        run_dir=run_dir,
    )
    from .train import format_ablation_table

    print(format_ablation_table(rows))
    print(f"artifacts in {run_dir}")


def _cmd_plot(args):
    made = []
    if args.run_dir:
        run_dir = Path(args.run_dir)
        out_dir = Path(args.out) if args.out else run_dir
        record_path = run_dir / "run.json"
        if record_path.exists():
            made.append(plot_loss_curves(load_run_record(record_path), out_dir / "loss_curves.png"))
        log_path = run_dir / "train_log.csv"
        if log_path.exists():
            made.append(plot_step_log(log_path, out_dir / "step_loss.png"))
        ablation_path = run_dir / "ablation.json"
        if ablation_path.exists():
            import json

            from .train.ablation import AblationRow, ArmResult

            rows = []
            for item in json.loads(ablation_path.read_text()):
                row = AblationRow(
                    hook_type=item["hook_type"],
                    supervision=item["supervision"],
                    seeds=tuple(item["seeds"]),
                    config=item["config"],
                )
                row.runs = [ArmResult(**r) for r in item["runs"]]
                rows.append(row)
            made.append(plot_ablation(rows, out_dir / "ablation.png"))
    if args.checkpoint and args.scene:
        net = _load_net(args.checkpoint)
        scene = load_scene(_data_dir(args), args.scene)
        zonemap, front = predict(net, scene)
        gt_front = extract_front(enhance_ocean(scene.zones), scene.meters_per_pixel)
        out = Path(args.out or ".") / f"{args.scene}_overlay.png"
        made.append(plot_front_overlay(scene, front, gt_front, out, pred_zones=zonemap))
    if not made:
        raise SystemExit("nothing to plot: pass --run-dir and/or --checkpoint with --scene")
    for path in made:
        print(f"wrote {path}")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="frontseg",
        description="Two-branch glacier zone segmentation and calving front delineation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate synthetic scenes")
    p.add_argument("--out", required=True)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--size", type=int, default=512)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--mpp", type=float, default=20.0)
    p.add_argument("--prefix", default="scene")
    p.set_defaults(func=_cmd_gen_data)

    p = sub.add_parser("train", help="train a model on a scene directory")
    p.add_argument("--data", help="scene directory (or FRONTSEG_DATA_ROOT)")
    p.add_argument("--val-data", dest="val_data", help="held-out validation scenes")
    p.add_argument("--run-dir", dest="run_dir", help="artifact directory")
    p.add_argument("--quiet", action="store_true")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("predict", help="predict zones and fronts from a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", help="scene directory (or FRONTSEG_DATA_ROOT)")
    p.add_argument("--scene", help="single scene stem; default: all in --data")
    p.add_argument("--out", required=True)
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.add_argument("--overlay", action="store_true")
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("evaluate", help="evaluate a checkpoint over a scene directory")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--data", help="scene directory (or FRONTSEG_DATA_ROOT)")
    p.add_argument("--out", help="write report.txt / report.csv here")
    p.add_argument("--batch-size", dest="batch_size", type=int)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("ablate", help="train the hook/supervision ablation grid")
    p.add_argument("--data", help="scene directory (or FRONTSEG_DATA_ROOT)")
    p.add_argument("--val-data", dest="val_data")
    p.add_argument("--run-dir", dest="run_dir")
    p.add_argument("--hooks", default="esca,sa,senet,cbam")
    p.add_argument("--supervisions", default="ds,cds")
    p.add_argument("--seeds", default="0,1,2")
    _add_config_flags(p)
    p.set_defaults(func=_cmd_ablate)

    p = sub.add_parser("plot", help="emit PNG curves and overlays")
    p.add_argument("--run-dir", dest="run_dir")
    p.add_argument("--checkpoint")
    p.add_argument("--scene")
    p.add_argument("--data", help="scene directory for --scene")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args) or 0


if __name__ == "__main__":
    sys.exit(main())
