import numpy as np
import pytest

from frontseg.data import (
    GRAY_ZONE_VALUES,
    Scene,
    SceneMeta,
    generate_dataset,
    generate_scene,
    load_directory,
    load_scene,
    remap_zone_values,
    save_dataset,
    save_scene,
    season_from_date,
)
from frontseg.validation import NUM_CLASSES, ZONE_GLACIER, ZONE_OCEAN


def test_generate_scene_shapes_and_ranges():
    scene = generate_scene(seed=3, size=(96, 128), meters_per_pixel=15.0)
    assert scene.image.shape == (96, 128)
    assert scene.zones.shape == (96, 128)
    assert scene.image.dtype == np.uint8
    assert scene.zones.dtype == np.uint8
    assert scene.zones.max() < NUM_CLASSES
    assert scene.meters_per_pixel == 15.0


def test_generate_scene_contains_glacier_and_ocean():
    scene = generate_scene(seed=11, size=(112, 112))
    present = set(np.unique(scene.zones).tolist())
    assert ZONE_GLACIER in present
    assert ZONE_OCEAN in present


def test_generate_scene_deterministic():
    a = generate_scene(seed=5, size=(64, 64))
    b = generate_scene(seed=5, size=(64, 64))
    assert np.array_equal(a.image, b.image)
    assert np.array_equal(a.zones, b.zones)
    assert a.meta == b.meta


def test_generate_scene_seed_changes_content():
    a = generate_scene(seed=5, size=(64, 64))
    b = generate_scene(seed=6, size=(64, 64))
    assert not np.array_equal(a.image, b.image)


def test_generate_dataset_distinct_and_deterministic():
    scenes = generate_dataset(4, seed=9, size=(64, 64))
    again = generate_dataset(4, seed=9, size=(64, 64))
    assert len(scenes) == 4
    for s, t in zip(scenes, again):
        assert np.array_equal(s.zones, t.zones)
    assert not np.array_equal(scenes[0].image, scenes[1].image)


def test_season_from_date():
    assert season_from_date("2020-07-15", hemisphere="north") == "summer"
    assert season_from_date("2020-01-15", hemisphere="north") == "winter"
    assert season_from_date("2020-07-15", hemisphere="south") == "winter"
    assert season_from_date("2020-04-01", hemisphere="north") == "summer"
    assert season_from_date("2020-10-01", hemisphere="north") == "winter"


def test_metadata_season_matches_date():
    for seed in range(8):
        scene = generate_scene(seed=seed, size=(64, 64))
        assert scene.meta.season == season_from_date(scene.meta.date)


def test_remap_zone_values_round_trip():
    zones = np.array([[0, 1], [2, 3]], dtype=np.uint8)
    gray = np.array(GRAY_ZONE_VALUES, dtype=np.uint8)[zones]
    assert np.array_equal(remap_zone_values(gray), zones)


def test_remap_zone_values_rejects_unknown():
    with pytest.raises(ValueError):
        remap_zone_values(np.array([[5]], dtype=np.uint8))


def test_save_load_scene_round_trip(tmp_path, flat_scene):
    save_scene(flat_scene, tmp_path, "glacier_a")
    loaded = load_scene(tmp_path, "glacier_a")
    assert np.array_equal(loaded.image, flat_scene.image)
    assert np.array_equal(loaded.zones, flat_scene.zones)
    assert loaded.meters_per_pixel == flat_scene.meters_per_pixel
    assert loaded.meta == flat_scene.meta


def test_save_dataset_and_load_directory(tmp_path):
    scenes = generate_dataset(3, seed=21, size=(64, 64))
    save_dataset(scenes, tmp_path, prefix="scene")
    named = load_directory(tmp_path, with_names=True)
    assert [name for name, _ in named] == ["scene_0000", "scene_0001", "scene_0002"]
    for (_, loaded), original in zip(named, scenes):
        assert np.array_equal(loaded.zones, original.zones)
        assert np.array_equal(loaded.image, original.image)
        assert loaded.meta == original.meta


def test_scene_validates_shapes():
    meta = SceneMeta(glacier_id="x", season="summer", satellite="s", date="2020-06-01")
    image = np.zeros((8, 8), dtype=np.uint8)
    zones = np.zeros((8, 9), dtype=np.uint8)
    with pytest.raises(ValueError):
        Scene(image=image, zones=zones, meters_per_pixel=20.0, meta=meta)
    with pytest.raises(ValueError):
        Scene(image=image, zones=np.full((8, 8), 7, np.uint8), meters_per_pixel=20.0, meta=meta)
    with pytest.raises(ValueError):
        Scene(image=image, zones=zones[:, :8], meters_per_pixel=-1.0, meta=meta)
