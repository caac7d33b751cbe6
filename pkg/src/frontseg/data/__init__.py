from .augment import augment_pair, transform_pair
from .pairs import (
    PatchPair,
    TileLayout,
    block_mean_2x2,
    make_pair,
    pairs_from_scene,
    stitch,
    subsample_labels_2x2,
    tile_scene,
)
from .scene import (
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

__all__ = [
    "GRAY_ZONE_VALUES",
    "PatchPair",
    "Scene",
    "SceneMeta",
    "TileLayout",
    "augment_pair",
    "block_mean_2x2",
    "generate_dataset",
    "generate_scene",
    "load_directory",
    "load_scene",
    "make_pair",
    "pairs_from_scene",
    "remap_zone_values",
    "save_dataset",
    "save_scene",
    "season_from_date",
    "stitch",
    "subsample_labels_2x2",
    "tile_scene",
    "transform_pair",
]
