import numpy as np
import pytest

from frontseg.data import augment_pair, generate_scene, make_pair, transform_pair
from frontseg.validation import NUM_CLASSES


@pytest.fixture
def pair():
    scene = generate_scene(seed=4, size=(128, 128))
    return make_pair(scene, origin=(32, 32), patch_size=64)


def test_identity_transform(pair):
    out = transform_pair(pair, angle=0.0, flip_horizontal=False, flip_vertical=False)
    assert np.array_equal(out.target_labels, pair.target_labels)
    assert np.array_equal(out.target_image, pair.target_image)
    assert np.array_equal(out.context_labels, pair.context_labels)


def test_rotation_180_reverses_both_axes(pair):
    out = transform_pair(pair, angle=180.0, flip_horizontal=False, flip_vertical=False)
    assert np.array_equal(out.target_labels, pair.target_labels[::-1, ::-1])
    assert np.array_equal(out.target_image, pair.target_image[::-1, ::-1])
    assert np.array_equal(out.context_image, pair.context_image[::-1, ::-1])


def test_rotation_90_matches_rot90(pair):
    out = transform_pair(pair, angle=90.0, flip_horizontal=False, flip_vertical=False)
    assert np.array_equal(out.target_labels, np.rot90(pair.target_labels))
    assert np.array_equal(out.target_image, np.rot90(pair.target_image))


def test_flips(pair):
    h = transform_pair(pair, angle=0.0, flip_horizontal=True, flip_vertical=False)
    v = transform_pair(pair, angle=0.0, flip_horizontal=False, flip_vertical=True)
    assert np.array_equal(h.target_labels, pair.target_labels[:, ::-1])
    assert np.array_equal(v.target_labels, pair.target_labels[::-1, :])


def test_double_flip_is_identity(pair):
    once = transform_pair(pair, angle=0.0, flip_horizontal=True, flip_vertical=True)
    twice = transform_pair(once, angle=0.0, flip_horizontal=True, flip_vertical=True)
    assert np.array_equal(twice.target_labels, pair.target_labels)
    assert np.array_equal(twice.target_image, pair.target_image)


def test_arbitrary_angle_keeps_labels_valid(pair):
    for angle in (13.7, 45.0, 222.2, 359.9):
        out = transform_pair(pair, angle=angle, flip_horizontal=False, flip_vertical=False)
        assert out.target_labels.max() < NUM_CLASSES
        assert out.target_labels.dtype == np.uint8
        assert out.target_image.shape == pair.target_image.shape
        assert out.context_labels.shape == pair.context_labels.shape


def test_augment_pair_deterministic(pair):
    a = augment_pair(pair, seed=99)
    b = augment_pair(pair, seed=99)
    c = augment_pair(pair, seed=100)
    assert np.array_equal(a.target_image, b.target_image)
    assert np.array_equal(a.target_labels, b.target_labels)
    assert not np.array_equal(a.target_image, c.target_image)


def test_augment_pair_preserves_metadata(pair):
    out = augment_pair(pair, seed=3)
    assert out.meters_per_pixel == pair.meters_per_pixel
    assert out.origin == pair.origin
