"""Plot emission: every helper writes a decodable PNG where asked."""

import numpy as np
import pytest
from PIL import Image

from frontseg.eval import FrontSet
from frontseg.plotting import (
    ZONE_COLORS,
    plot_ablation,
    plot_front_overlay,
    plot_loss_curves,
    plot_step_log,
    zonemap_to_rgb,
)
from frontseg.train.ablation import AblationRow, ArmResult
from frontseg.train.loop import EpochStats, RunRecord


def assert_png(path):
    assert path.exists()
    with Image.open(path) as img:
        assert img.size[0] > 0


@pytest.fixture
def record():
    rec = RunRecord(config={"scale": "tiny"})
    for e in range(3):
        rec.epochs.append(EpochStats(
            epoch=e, lr=0.01 * 0.9 ** e, loss_total=1.0 / (e + 1),
            loss_target=0.5 / (e + 1), loss_context=0.3 / (e + 1),
            loss_supervision=0.2 / (e + 1), val_macro_iou=0.5 + 0.1 * e,
        ))
    return rec


def test_zonemap_to_rgb_uses_one_color_per_class():
    rgb = zonemap_to_rgb(np.array([[0, 1], [2, 3]]))
    assert rgb.shape == (2, 2, 3) and rgb.dtype == np.uint8
    assert np.array_equal(rgb[0, 0], ZONE_COLORS[0])
    assert np.array_equal(rgb[1, 1], ZONE_COLORS[3])


def test_plot_loss_curves_writes_png(record, tmp_path):
    out = plot_loss_curves(record, tmp_path / "nested" / "curves.png")
    assert_png(out)


def test_plot_loss_curves_accepts_dict_epochs(record, tmp_path):
    record.epochs = [e.__dict__ for e in record.epochs]
    assert_png(plot_loss_curves(record, tmp_path / "curves.png"))


def test_plot_step_log_reads_csv(tmp_path):
    log = tmp_path / "train_log.csv"
    log.write_text("step,epoch,total\n1,0,2.0\n2,0,1.5\n3,1,1.2\n")
    assert_png(plot_step_log(log, tmp_path / "steps.png"))


def test_plot_ablation_handles_missing_stats(tmp_path):
    row = AblationRow(hook_type="esca", supervision="cds", seeds=(0, 1), config={})
    row.runs = [
        ArmResult(seed=0, val_macro_iou=0.8, mde_m=10.0, hd95_m=20.0, no_front_count=0),
        ArmResult(seed=1, val_macro_iou=0.9, mde_m=None, hd95_m=None, no_front_count=1),
    ]
    assert_png(plot_ablation([row], tmp_path / "ablation.png"))


def test_plot_front_overlay_with_and_without_zones(flat_scene, tmp_path):
    front = FrontSet(frozenset({(1, 2), (3, 4)}), flat_scene.meters_per_pixel)
    empty = FrontSet(frozenset(), flat_scene.meters_per_pixel)
    assert_png(plot_front_overlay(flat_scene, front, empty, tmp_path / "a.png"))
    assert_png(plot_front_overlay(
        flat_scene, empty, front, tmp_path / "b.png", pred_zones=flat_scene.zones
    ))
