"""Scene container, synthetic scene generation, and on-disk formats.

A scene couples one single-channel intensity raster with a zone raster of
the same shape (0=NA, 1=ROCK, 2=GLACIER, 3=OCEAN), a ground resolution in
meters per pixel, and acquisition metadata.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from PIL import Image
from scipy.ndimage import gaussian_filter

from ..validation import (
    SEASONS,
    ZONE_GLACIER,
    ZONE_NA,
    ZONE_OCEAN,
    ZONE_ROCK,
    check_positive,
    check_same_shape,
    check_zonemap,
)

GLACIER_NAMES = ("aster", "borea", "cardo", "delta")
SATELLITES = ("syn-a", "syn-b")

META_KEYS = ("glacier_id", "season", "satellite", "meters_per_pixel", "date")


@dataclass(frozen=True)
class SceneMeta:
    glacier_id: str = "unknown"
    season: str = "summer"
    satellite: str = "unknown"
    date: str = ""


@dataclass(frozen=True)
class Scene:
    """Intensity raster plus aligned zone labels and acquisition metadata."""

    image: np.ndarray
    zones: np.ndarray
    meters_per_pixel: float
    meta: SceneMeta = SceneMeta()

    def __post_init__(self):
        check_zonemap(self.zones)
        check_same_shape(self.image, self.zones, "image", "zones")
        check_positive(self.meters_per_pixel, "meters_per_pixel")

    @property
    def shape(self):
        return self.zones.shape


def _wavy_line(rng, n, base, amplitude):
    """Smooth 1-D curve around ``base`` built from a few random sinusoids."""
    t = np.linspace(0.0, 1.0, n)
    line = np.full(n, float(base))
    for _ in range(3):
        freq = rng.uniform(0.5, 3.0)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        line += rng.uniform(0.2, 1.0) * amplitude * np.sin(2.0 * np.pi * freq * t + phase)
    return line


def generate_scene(seed, size=(512, 512), meters_per_pixel=20.0):
    """Generate one synthetic glacier scene with all four zones.

    Layout: a NA stripe along the top edge, rock margins along the top and
    bottom, and a glacier/ocean split along a wavy vertical front between
    them.  Textures are class-dependent filtered noise; the ocean side
    carries sparse bright melange blobs near the front so the boundary is
    not trivially decided by intensity alone.
    """
    rng = np.random.default_rng(seed)
    h, w = int(size[0]), int(size[1])
    if h < 16 or w < 16:
        raise ValueError(f"scene size must be at least 16x16, got {(h, w)}")

    rows = np.arange(h)[:, None]
    cols = np.arange(w)[None, :]

    # Glacier left of the front curve, ocean right of it.
    front_col = _wavy_line(rng, h, w * rng.uniform(0.45, 0.55), w * 0.06)
    front_col = np.clip(front_col, w * 0.25, w * 0.75)
    zones = np.where(cols < front_col[:, None], ZONE_GLACIER, ZONE_OCEAN).astype(np.uint8)

    # Rock margins, then the NA stripe strictly inside the top margin.
    top_rock = np.clip(_wavy_line(rng, w, h * 0.14, h * 0.03), h * 0.06, h * 0.30)
    bottom_rock = np.clip(_wavy_line(rng, w, h * 0.86, h * 0.03), h * 0.70, h * 0.94)
    zones[rows < top_rock[None, :]] = ZONE_ROCK
    zones[rows >= bottom_rock[None, :]] = ZONE_ROCK
    na_rows = max(2, int(h * rng.uniform(0.03, 0.06)))
    zones[:na_rows] = ZONE_NA

    base = np.empty((h, w), dtype=np.float64)
    base[zones == ZONE_NA] = 10.0
    base[zones == ZONE_ROCK] = 70.0
    base[zones == ZONE_OCEAN] = 115.0
    base[zones == ZONE_GLACIER] = 185.0

    # Class-dependent texture scales: glacier fine/high contrast, ocean smooth.
    texture = gaussian_filter(rng.normal(0.0, 1.0, (h, w)), 1.0)
    texture /= max(texture.std(), 1e-8)
    base[zones == ZONE_GLACIER] += 22.0 * texture[zones == ZONE_GLACIER]
    base[zones == ZONE_ROCK] += 14.0 * texture[zones == ZONE_ROCK]
    base[zones == ZONE_OCEAN] += 6.0 * texture[zones == ZONE_OCEAN]

    # Bright melange blobs drifting in the ocean near the front.
    melange = gaussian_filter(rng.normal(0.0, 1.0, (h, w)), 3.0)
    near_front = (cols - front_col[:, None]) / max(w * 0.04, 1.0)
    melange_mask = (zones == ZONE_OCEAN) & (melange > 0.55 * melange.std() + 0.02 * near_front)
    base[melange_mask] = 150.0 + 12.0 * texture[melange_mask]

    # Gentle illumination gradient plus pixel noise, softened boundaries.
    direction = rng.uniform(0.0, 2.0 * np.pi)
    ramp = (rows * np.sin(direction) + cols * np.cos(direction)) / max(h, w)
    base += 8.0 * (ramp - ramp.mean())
    base = gaussian_filter(base, 0.6)
    base += rng.normal(0.0, 4.0, (h, w))
    image = np.clip(base, 0.0, 255.0).astype(np.uint8)

    season = rng.choice(SEASONS)
    month = int(rng.integers(5, 10)) if season == "summer" else int(rng.integers(11, 13))
    meta = SceneMeta(
        glacier_id=str(rng.choice(GLACIER_NAMES)),
        season=str(season),
        satellite=str(rng.choice(SATELLITES)),
        date=f"{int(rng.integers(2008, 2021)):04d}-{month:02d}-{int(rng.integers(1, 29)):02d}",
    )
    return Scene(image=image, zones=zones, meters_per_pixel=float(meters_per_pixel), meta=meta)


def generate_dataset(num_scenes, seed, size=(512, 512), meters_per_pixel=20.0):
    """Generate ``num_scenes`` scenes with per-scene seeds derived from ``seed``."""
    root = np.random.SeedSequence(seed)
    return [
        generate_scene(child, size=size, meters_per_pixel=meters_per_pixel)
        for child in root.spawn(num_scenes)
    ]


def season_from_date(date, hemisphere="north"):
    """Derive the season from an ISO date: months 4-9 are northern summer."""
    month = int(str(date).split("-")[1])
    summer = 4 <= month <= 9
    if hemisphere == "south":
        summer = not summer
    elif hemisphere != "north":
        raise ValueError(f"hemisphere must be north or south, got {hemisphere!r}")
    return "summer" if summer else "winter"


# 8-bit gray levels used by common benchmark zone masks, in class order.
GRAY_ZONE_VALUES = (0, 64, 127, 254)


def remap_zone_values(zones, values=GRAY_ZONE_VALUES):
    """Map a gray-coded zone mask onto dense class ids {0,1,2,3}."""
    zones = np.asarray(zones)
    out = np.full(zones.shape, 255, dtype=np.uint8)
    for class_id, value in enumerate(values):
        out[zones == value] = class_id
    if (out == 255).any():
        bad = sorted(int(v) for v in np.unique(zones) if v not in values)
        raise ValueError(f"zone mask contains values outside {values}: {bad}")
    return out


def save_scene(scene, directory, stem):
    """Write ``<stem>.png``, ``<stem>_zones.png`` and ``<stem>_meta.txt``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    Image.fromarray(np.asarray(scene.image, dtype=np.uint8), mode="L").save(
        directory / f"{stem}.png"
    )
    Image.fromarray(np.asarray(scene.zones, dtype=np.uint8), mode="L").save(
        directory / f"{stem}_zones.png"
    )
    meta = dataclasses.asdict(scene.meta)
    meta["meters_per_pixel"] = repr(scene.meters_per_pixel)
    lines = [f"{key}: {meta[key]}" for key in META_KEYS]
    (directory / f"{stem}_meta.txt").write_text("\n".join(lines) + "\n")


def load_scene(directory, stem):
    directory = Path(directory)
    image = np.asarray(Image.open(directory / f"{stem}.png"), dtype=np.uint8)
    zones = np.asarray(Image.open(directory / f"{stem}_zones.png"), dtype=np.uint8)
    meta_path = directory / f"{stem}_meta.txt"
    fields = {}
    if meta_path.exists():
        for line in meta_path.read_text().splitlines():
            if ":" in line:
                key, value = line.split(":", 1)
                fields[key.strip()] = value.strip()
    mpp = float(fields.pop("meters_per_pixel", 1.0))
    meta = SceneMeta(**{k: v for k, v in fields.items() if k in META_KEYS})
    return Scene(image=image, zones=zones, meters_per_pixel=mpp, meta=meta)


def load_directory(directory, with_names=False):
    """Load every ``<stem>.png`` / ``<stem>_zones.png`` pair under ``directory``.

    Returns scenes sorted by stem; ``with_names=True`` yields
    ``(stem, scene)`` tuples instead.
    """
    directory = Path(directory)
    stems = sorted(
        p.name[: -len("_zones.png")] for p in directory.glob("*_zones.png")
    )
    if not stems:
        raise FileNotFoundError(f"no scene pairs (*_zones.png) found under {directory}")
    scenes = [load_scene(directory, stem) for stem in stems]
    if with_names:
        return list(zip(stems, scenes))
    return scenes


def save_dataset(scenes, directory, prefix="scene"):
    width = max(4, len(str(len(scenes))))
    for i, scene in enumerate(scenes):
        save_scene(scene, directory, f"{prefix}_{i:0{width}d}")
