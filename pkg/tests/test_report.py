import numpy as np
import pytest

from frontseg.data import generate_scene
from frontseg.eval import (
    FrontSet,
    build_report,
    enhance_ocean,
    extract_front,
    format_report,
    image_result,
    load_front_csv,
    report_to_csv,
    save_front_csv,
)

from conftest import make_zones


def perfect_result(name, seed):
    scene = generate_scene(seed=seed, size=(64, 64))
    clean = enhance_ocean(scene.zones)
    front = extract_front(clean, scene.meters_per_pixel)
    return image_result(name, scene, clean, front, front)


def missing_front_result(name, seed):
    scene = generate_scene(seed=seed, size=(64, 64))
    pred = np.zeros_like(scene.zones)  # all NA, no front
    gt = extract_front(enhance_ocean(scene.zones), scene.meters_per_pixel)
    return image_result(name, scene, pred, FrontSet(frozenset(), scene.meters_per_pixel), gt)


def test_perfect_report_overall():
    results = [perfect_result(f"s{i}", i) for i in range(4)]
    report = build_report(results)
    assert report.overall.count == 4
    assert report.overall.no_front_count == 0
    assert report.overall.macro.iou == 1.0
    assert report.overall.mde_m == 0.0
    assert report.overall.hd95_m == 0.0


def test_missing_fronts_excluded_from_distances_but_counted():
    results = [perfect_result("good", 0), missing_front_result("bad", 1)]
    report = build_report(results)
    assert report.overall.count == 2
    assert report.overall.no_front_count == 1
    assert report.overall.mde_m == 0.0  # only the good image contributes


def test_all_missing_gives_none_distances():
    report = build_report([missing_front_result("bad", 2)])
    assert report.overall.mde_m is None
    assert report.overall.hd95_m is None
    assert report.overall.no_front_count == 1


def test_groups_partition_by_metadata():
    results = [perfect_result(f"s{i}", i) for i in range(6)]
    report = build_report(results)
    for key in ("glacier", "season", "satellite", "resolution"):
        sections = report.groups[key]
        assert sum(sec.count for sec in sections.values()) == 6
    seasons = set(report.groups["season"])
    assert seasons <= {"summer", "winter"}


def test_format_report_mentions_groups():
    results = [perfect_result(f"s{i}", i) for i in range(3)]
    text = format_report(build_report(results))
    assert "overall" in text
    assert "season" in text
    assert "100.00" in text


def test_report_csv_has_image_and_aggregate_rows():
    results = [perfect_result("alpha", 0), perfect_result("beta", 1)]
    report = build_report(results)
    csv_text = report_to_csv(report, results)
    lines = csv_text.strip().splitlines()
    header = lines[0].split(",")
    assert header[0] == "row_type"
    kinds = {line.split(",")[0] for line in lines[1:]}
    assert kinds == {"image", "aggregate"}
    agg_names = {line.split(",")[1] for line in lines if line.startswith("aggregate")}
    assert "overall" in agg_names
    names = {line.split(",")[1] for line in lines if line.startswith("image")}
    assert names == {"alpha", "beta"}


def test_front_csv_round_trip(tmp_path):
    zones = make_zones(12, 12, 6)
    front = extract_front(zones, meters_per_pixel=17.5)
    path = tmp_path / "front.csv"
    save_front_csv(front, path)
    loaded = load_front_csv(path)
    assert loaded.pixels == front.pixels
    assert loaded.meters_per_pixel == front.meters_per_pixel


def test_front_csv_empty_round_trip(tmp_path):
    front = FrontSet(frozenset(), meters_per_pixel=5.0)
    path = tmp_path / "front.csv"
    save_front_csv(front, path)
    loaded = load_front_csv(path)
    assert len(loaded) == 0
    assert loaded.meters_per_pixel == 5.0
