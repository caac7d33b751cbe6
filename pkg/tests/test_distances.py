import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frontseg.eval import FrontSet, hausdorff, hd95, mde, nearest_distances


def brute_force_nearest(from_points, to_points):
    out = []
    for p in from_points:
        best = min(
            np.hypot(p[0] - q[0], p[1] - q[1]) for q in to_points
        )
        out.append(best)
    return np.asarray(out)


def random_front(rng, max_points=200, mpp=1.0):
    n = int(rng.integers(1, max_points + 1))
    pts = rng.integers(0, 256, size=(n, 2))
    return FrontSet(
        pixels=frozenset((int(r), int(c)) for r, c in pts), meters_per_pixel=mpp
    )


def test_nearest_distances_matches_brute_force():
    rng = np.random.default_rng(0)
    for _ in range(25):
        a = random_front(rng, max_points=40)
        b = random_front(rng, max_points=40)
        got = nearest_distances(a.to_array(), b.to_array())
        want = brute_force_nearest(sorted(a.pixels), sorted(b.pixels))
        assert np.allclose(got, want, rtol=1e-9, atol=0)


def test_mde_hand_case():
    a = FrontSet(frozenset({(0, 0), (0, 2)}), meters_per_pixel=2.0)
    b = FrontSet(frozenset({(0, 1)}), meters_per_pixel=2.0)
    # a->b: 1, 1 ; b->a: 1 ; pooled mean = 1 px = 2 m
    assert mde([(a, b)]) == pytest.approx(2.0)


def test_mde_pools_globally_not_mean_of_means():
    # image 1: many zero distances; image 2: one large distance
    a1 = FrontSet(frozenset({(0, c) for c in range(10)}), 1.0)
    b1 = a1
    a2 = FrontSet(frozenset({(0, 0)}), 1.0)
    b2 = FrontSet(frozenset({(0, 5)}), 1.0)
    pooled = mde([(a1, b1), (a2, b2)])
    # 20 zero distances + 2 distances of 5 => 10/22
    assert pooled == pytest.approx(10.0 / 22.0)
    assert pooled != pytest.approx((0.0 + 5.0) / 2.0)


def test_mde_empty_input_returns_none():
    assert mde([]) is None


def test_symmetry():
    rng = np.random.default_rng(3)
    for _ in range(10):
        a, b = random_front(rng), random_front(rng)
        assert mde([(a, b)]) == pytest.approx(mde([(b, a)]), rel=1e-12)
        assert hd95([(a, b)]) == pytest.approx(hd95([(b, a)]), rel=1e-12)
        assert hausdorff([(a, b)]) == pytest.approx(hausdorff([(b, a)]), rel=1e-12)


def test_scale_equivariance():
    rng = np.random.default_rng(4)
    a, b = random_front(rng, mpp=1.0), random_front(rng, mpp=1.0)
    a3 = FrontSet(a.pixels, meters_per_pixel=3.0)
    b3 = FrontSet(b.pixels, meters_per_pixel=3.0)
    assert mde([(a3, b3)]) == pytest.approx(3.0 * mde([(a, b)]), rel=1e-12)
    assert hd95([(a3, b3)]) == pytest.approx(3.0 * hd95([(a, b)]), rel=1e-12)


def test_hd95_le_hd_and_hd_ge_mean_of_mins():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b = random_front(rng), random_front(rng)
        pairs = [(a, b)]
        assert hd95(pairs) <= hausdorff(pairs) + 1e-12
        assert hausdorff(pairs) >= mde(pairs) - 1e-12


def test_hd95_trims_single_outlier():
    # 199 coincident points plus one 1000 px outlier: the 95th percentile
    # ignores the outlier, the exact Hausdorff does not.
    base = {(0, c) for c in range(199)}
    a = FrontSet(frozenset(base | {(1000, 0)}), 1.0)
    b = FrontSet(frozenset(base), 1.0)
    assert hausdorff([(a, b)]) >= 1000.0
    assert hd95([(a, b)]) < 10.0


def test_pooled_hd95_differs_from_mean():
    a1 = FrontSet(frozenset({(0, 0)}), 1.0)
    b1 = FrontSet(frozenset({(0, 10)}), 1.0)
    a2 = FrontSet(frozenset({(0, 0)}), 1.0)
    b2 = a2
    per_image = hd95([(a1, b1), (a2, b2)])
    pooled = hd95([(a1, b1), (a2, b2)], pooled=True)
    assert per_image == pytest.approx((10.0 + 0.0) / 2.0)
    assert pooled == pytest.approx(np.percentile([10.0, 10.0, 0.0, 0.0], 95))


def test_mismatched_resolution_rejected():
    a = FrontSet(frozenset({(0, 0)}), 1.0)
    b = FrontSet(frozenset({(0, 1)}), 2.0)
    with pytest.raises(ValueError):
        mde([(a, b)])


def test_empty_front_rejected():
    a = FrontSet(frozenset(), 1.0)
    b = FrontSet(frozenset({(0, 1)}), 1.0)
    with pytest.raises(ValueError):
        mde([(a, b)])


@given(st.integers(0, 2**31 - 1))
@settings(max_examples=25, deadline=None)
def test_identity_distances_are_zero(seed):
    rng = np.random.default_rng(seed)
    a = random_front(rng, max_points=50)
    assert mde([(a, a)]) == 0.0
    assert hausdorff([(a, a)]) == 0.0
    assert hd95([(a, a)]) == 0.0
