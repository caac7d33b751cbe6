import sys

import numpy as np
import pytest

from frontseg.data import Scene, SceneMeta


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Repeat the acceptance-criterion verdicts after the capture-blind run."""
    acceptance = sys.modules.get("test_acceptance")
    lines = getattr(acceptance, "SUMMARY_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


def make_zones(height, width, front_col):
    """Zonemap that is glacier left of front_col and ocean from it on."""
    zones = np.full((height, width), 2, dtype=np.uint8)
    zones[:, front_col:] = 3
    return zones


@pytest.fixture
def flat_scene():
    zones = make_zones(64, 64, 32)
    image = np.where(zones == 2, 180, 110).astype(np.uint8)
    meta = SceneMeta(glacier_id="test", season="summer", satellite="syn-a", date="2021-07-01")
    return Scene(image=image, zones=zones, meters_per_pixel=20.0, meta=meta)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
