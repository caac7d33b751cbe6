"""Ablation row statistics and table/CSV/JSON serialization.

Uses hand-built ArmResult lists so no training is involved; the end-to-end
grid itself is exercised in the acceptance suite.
"""

import csv
import io
import json

import numpy as np
import pytest

from frontseg.train import format_ablation_table
from frontseg.train.ablation import (
    AblationRow,
    ArmResult,
    ablation_to_csv,
    ablation_to_json,
)


def make_row(hook="esca", supervision="cds", ious=(0.8, 0.9), mdes=(10.0, 20.0)):
    row = AblationRow(hook_type=hook, supervision=supervision,
                      seeds=tuple(range(len(ious))), config={"scale": "tiny"})
    for seed, (iou, mde) in enumerate(zip(ious, mdes)):
        row.runs.append(ArmResult(seed=seed, val_macro_iou=iou, mde_m=mde,
                                  hd95_m=None if mde is None else 2 * mde,
                                  no_front_count=seed))
    return row


def test_stats_mean_and_population_std():
    row = make_row(ious=(0.8, 0.9), mdes=(10.0, 20.0))
    mean, std = row.stats("val_macro_iou")
    assert mean == pytest.approx(0.85)
    assert std == pytest.approx(np.std([0.8, 0.9]))
    mean, std = row.stats("mde_m")
    assert (mean, std) == (pytest.approx(15.0), pytest.approx(5.0))


def test_stats_skip_missing_and_all_missing():
    row = make_row(ious=(0.8, 0.9, 0.7), mdes=(None, 12.0, None))
    mean, _ = row.stats("mde_m")
    assert mean == pytest.approx(12.0)
    row_none = make_row(ious=(0.5,), mdes=(None,))
    assert row_none.stats("mde_m") == (None, None)


def test_table_has_one_line_per_arm_with_mean_std_cells():
    rows = [make_row("esca", "ds"), make_row("sa", "cds", ious=(0.6, 0.6))]
    text = format_ablation_table(rows)
    lines = text.splitlines()
    assert len(lines) == 2 + len(rows)  # header + rule + one per arm
    assert lines[0].split()[:2] == ["hook", "supervision"]
    assert "85.00±5.00" in lines[2]  # IoU reported in percent
    assert "60.00±0.00" in lines[3]
    assert "n/a" in format_ablation_table([make_row(ious=(0.5,), mdes=(None,))])


def test_csv_one_line_per_run():
    rows = [make_row("esca", "ds"), make_row("cbam", "cds")]
    parsed = list(csv.DictReader(io.StringIO(ablation_to_csv(rows))))
    assert len(parsed) == 4
    assert parsed[0]["hook"] == "esca" and parsed[0]["supervision"] == "ds"
    assert float(parsed[1]["val_macro_iou"]) == pytest.approx(0.9)
    assert parsed[2]["seed"] == "0"
    empty = make_row(ious=(0.5,), mdes=(None,))
    assert list(csv.DictReader(io.StringIO(ablation_to_csv([empty]))))[0]["mde_m"] == ""


def test_json_round_trips_through_row_reconstruction():
    rows = [make_row("senet", "cds")]
    payload = json.loads(ablation_to_json(rows))
    assert payload[0]["iou_mean"] == pytest.approx(0.85)
    rebuilt = AblationRow(
        hook_type=payload[0]["hook_type"],
        supervision=payload[0]["supervision"],
        seeds=tuple(payload[0]["seeds"]),
        config=payload[0]["config"],
    )
    rebuilt.runs = [ArmResult(**r) for r in payload[0]["runs"]]
    assert rebuilt.stats("val_macro_iou") == rows[0].stats("val_macro_iou")
    assert rebuilt.runs == rows[0].runs
