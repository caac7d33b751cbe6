"""Per-image evaluation records, grouped aggregation, and report emission.

The global delineation metrics pool distances over images (see
``distances``); group sections apply the same pooling restricted to the
group's images, so a single all-inclusive group reproduces the global
numbers exactly.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np

from .distances import hausdorff, hd95, mde
from .postprocess import FrontSet
from .segmetrics import ClassScores, confusion_counts, scores_from_counts

GROUP_KEYS = ("glacier", "season", "satellite", "resolution")


@dataclass(frozen=True)
class ImageResult:
    """Everything evaluation needs to remember about one scene."""

    name: str
    glacier_id: str
    season: str
    satellite: str
    meters_per_pixel: float
    counts: np.ndarray
    pred_front: FrontSet
    gt_front: FrontSet

    @property
    def front_missing(self):
        return len(self.pred_front) == 0

    def group_value(self, key):
        if key == "glacier":
            return self.glacier_id
        if key == "season":
            return self.season
        if key == "satellite":
            return self.satellite
        if key == "resolution":
            return f"{self.meters_per_pixel:g}m"
        raise KeyError(f"unknown grouping key {key!r}; known: {GROUP_KEYS}")


def image_result(name, scene, pred_zones, pred_front, gt_front):
    return ImageResult(
        name=name,
        glacier_id=scene.meta.glacier_id,
        season=scene.meta.season,
        satellite=scene.meta.satellite,
        meters_per_pixel=scene.meters_per_pixel,
        counts=confusion_counts(pred_zones, scene.zones),
        pred_front=pred_front,
        gt_front=gt_front,
    )


@dataclass(frozen=True)
class ReportSection:
    count: int
    no_front_count: int
    per_class: dict
    macro: ClassScores
    mde_m: float
    hd95_m: float
    hd_m: float


@dataclass(frozen=True)
class MetricsReport:
    overall: ReportSection
    groups: dict


def _section(results):
    counts = np.sum([r.counts for r in results], axis=0)
    per_class, macro = scores_from_counts(counts)
    # Predictions without a front are tallied, not penalised with a distance;
    # scenes whose ground truth has no front cannot be measured either.
    pairs = [
        (r.gt_front, r.pred_front)
        for r in results
        if len(r.pred_front) > 0 and len(r.gt_front) > 0
    ]
    return ReportSection(
        count=len(results),
        no_front_count=sum(1 for r in results if r.front_missing),
        per_class=per_class,
        macro=macro,
        mde_m=mde(pairs),
        hd95_m=hd95(pairs),
        hd_m=hausdorff(pairs),
    )


def build_report(results, group_keys=GROUP_KEYS):
    """Aggregate per-image results globally and per metadata group."""
    results = list(results)
    if not results:
        raise ValueError("cannot build a report from zero images")
    groups = {}
    for key in group_keys:
        values = sorted({r.group_value(key) for r in results})
        groups[key] = {
            value: _section([r for r in results if r.group_value(key) == value])
            for value in values
        }
    return MetricsReport(overall=_section(results), groups=groups)


def _fmt(value, scale=1.0):
    if value is None:
        return "n/a"
    return f"{value * scale:.2f}"


_SECTION_COLUMNS = (
    "count",
    "no_front",
    "precision",
    "recall",
    "f1",
    "iou",
    "mde_m",
    "hd95_m",
    "hd_m",
)


def _section_cells(section):
    return (
        section.count,
        section.no_front_count,
        _fmt(section.macro.precision, 100.0),
        _fmt(section.macro.recall, 100.0),
        _fmt(section.macro.f1, 100.0),
        _fmt(section.macro.iou, 100.0),
        _fmt(section.mde_m),
        _fmt(section.hd95_m),
        _fmt(section.hd_m),
    )


def format_report(report):
    """Human-readable table: one overall row, then one row per group value.

    Ratio columns are percentages; distance columns are meters.
    """
    header = ("scope", "group") + _SECTION_COLUMNS
    rows = [header, ("overall", "-") + _section_cells(report.overall)]
    for key, sections in report.groups.items():
        for value, section in sections.items():
            rows.append((key, value) + _section_cells(section))
    widths = [max(len(str(row[i])) for row in rows) for i in range(len(header))]
    lines = []
    for i, row in enumerate(rows):
        lines.append("  ".join(str(cell).rjust(w) for cell, w in zip(row, widths)))
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    per_class = report.overall.per_class
    lines.append("")
    lines.append("per-class iou (overall): " + "  ".join(
        f"{name}={_fmt(scores.iou, 100.0)}" for name, scores in per_class.items()
    ))
    return "\n".join(lines)


def report_to_csv(report, results):
    """CSV with one row per image followed by aggregate rows."""
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        ("row_type", "name", "glacier", "season", "satellite", "resolution")
        + _SECTION_COLUMNS
    )
    for r in results:
        per_class, macro = scores_from_counts(r.counts)
        pair = [(r.gt_front, r.pred_front)] if (r.pred_front and r.gt_front) else []
        writer.writerow(
            (
                "image",
                r.name,
                r.glacier_id,
                r.season,
                r.satellite,
                f"{r.meters_per_pixel:g}m",
                1,
                int(r.front_missing),
                _fmt(macro.precision, 100.0),
                _fmt(macro.recall, 100.0),
                _fmt(macro.f1, 100.0),
                _fmt(macro.iou, 100.0),
                _fmt(mde(pair)),
                _fmt(hd95(pair)),
                _fmt(hausdorff(pair)),
            )
        )
    writer.writerow(("aggregate", "overall", "-", "-", "-", "-") + _section_cells(report.overall))
    for key, sections in report.groups.items():
        for value, section in sections.items():
            row_meta = {k: "-" for k in ("glacier", "season", "satellite", "resolution")}
            row_meta[key] = value
            writer.writerow(
                ("aggregate", f"{key}={value}", row_meta["glacier"], row_meta["season"],
                 row_meta["satellite"], row_meta["resolution"]) + _section_cells(section)
            )
    return buf.getvalue()


def save_front_csv(front, path):
    """Write a FrontSet as (row, col) CSV under a resolution header line."""
    with open(path, "w", newline="") as fh:
        fh.write(f"# meters_per_pixel: {front.meters_per_pixel!r}\n")
        writer = csv.writer(fh)
        writer.writerow(("row", "col"))
        for row, col in sorted(front.pixels):
            writer.writerow((row, col))


def load_front_csv(path):
    with open(path, newline="") as fh:
        header = fh.readline()
        if "meters_per_pixel" not in header:
            raise ValueError(f"{path} lacks the meters_per_pixel header line")
        mpp = float(header.split(":", 1)[1])
        reader = csv.reader(fh)
        next(reader)  # column names
        pixels = frozenset((int(r), int(c)) for r, c in reader)
    return FrontSet(pixels=pixels, meters_per_pixel=mpp)
