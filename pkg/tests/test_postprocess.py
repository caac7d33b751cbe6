import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra import numpy as hnp

from frontseg.eval import FrontSet, enhance_ocean, extract_front
from frontseg.validation import ZONE_GLACIER, ZONE_NA, ZONE_OCEAN, ZONE_ROCK

from conftest import make_zones


def test_enhance_keeps_largest_ocean_component():
    zones = make_zones(8, 8, 4)
    zones[0, 0] = ZONE_OCEAN  # isolated single-pixel ocean in the glacier half
    out = enhance_ocean(zones)
    assert out[0, 0] == ZONE_GLACIER
    assert (out[:, 4:] == ZONE_OCEAN).all()


def test_enhance_does_not_touch_rock_or_na():
    zones = make_zones(8, 8, 4)
    zones[0, :] = ZONE_ROCK
    zones[7, :] = ZONE_NA
    zones[3, 1] = ZONE_OCEAN
    out = enhance_ocean(zones)
    assert (out[0, :] == ZONE_ROCK).all()
    assert (out[7, :] == ZONE_NA).all()
    assert out[3, 1] == ZONE_GLACIER


def test_enhance_tie_keeps_first_component_in_scan_order():
    zones = np.full((3, 5), ZONE_GLACIER, dtype=np.uint8)
    zones[0, 0] = ZONE_OCEAN
    zones[2, 4] = ZONE_OCEAN
    out = enhance_ocean(zones)
    assert out[0, 0] == ZONE_OCEAN
    assert out[2, 4] == ZONE_GLACIER


def test_enhance_no_ocean_is_noop():
    zones = np.full((4, 4), ZONE_GLACIER, dtype=np.uint8)
    assert np.array_equal(enhance_ocean(zones), zones)


def test_enhance_returns_copy():
    zones = make_zones(6, 6, 3)
    out = enhance_ocean(zones)
    out[0, 0] = ZONE_NA
    assert zones[0, 0] == ZONE_GLACIER


@given(
    hnp.arrays(
        np.uint8,
        st.tuples(st.integers(2, 12), st.integers(2, 12)),
        elements=st.integers(0, 3),
    )
)
@settings(max_examples=100, deadline=None)
def test_enhance_idempotent(zones):
    once = enhance_ocean(zones)
    assert np.array_equal(enhance_ocean(once), once)


def test_extract_front_half_ocean_is_boundary_column():
    zones = make_zones(16, 16, 8)
    front = extract_front(zones, meters_per_pixel=20.0)
    expected = {(r, 7) for r in range(16)}
    assert front.pixels == frozenset(expected)


def test_extract_front_uses_four_connectivity():
    zones = np.full((3, 3), ZONE_GLACIER, dtype=np.uint8)
    zones[1, 1] = ZONE_OCEAN
    front = extract_front(zones, meters_per_pixel=10.0)
    assert front.pixels == frozenset({(0, 1), (1, 0), (1, 2), (2, 1)})


def test_extract_front_no_contact_is_empty():
    zones = np.full((4, 4), ZONE_GLACIER, dtype=np.uint8)
    zones[0, :] = ZONE_ROCK
    front = extract_front(zones, meters_per_pixel=10.0)
    assert len(front) == 0


def test_front_set_round_trip():
    zones = make_zones(10, 12, 5)
    front = extract_front(zones, meters_per_pixel=15.0)
    arr = front.to_array()
    assert arr.shape == (10, 2)
    assert arr.dtype == np.int64
    assert np.array_equal(arr, np.array(sorted(front.pixels)))
    mask = front.to_mask((10, 12))
    assert mask.sum() == len(front)
    assert all(mask[r, c] for r, c in front.pixels)


def test_extract_front_rejects_bad_zone_values():
    with pytest.raises(ValueError):
        extract_front(np.full((4, 4), 9, dtype=np.uint8), meters_per_pixel=10.0)
