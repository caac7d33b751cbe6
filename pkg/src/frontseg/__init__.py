"""Two-branch glacier zone segmentation and calving-front delineation."""

from . import data, eval, losses, model, train
from .estimator import CalvingFrontSegmenter
from .validation import (
    NUM_CLASSES,
    ZONE_GLACIER,
    ZONE_NA,
    ZONE_OCEAN,
    ZONE_ROCK,
    ZONE_NAMES,
)

__version__ = "0.1.0"

__all__ = [
    "CalvingFrontSegmenter",
    "NUM_CLASSES",
    "ZONE_GLACIER",
    "ZONE_NA",
    "ZONE_NAMES",
    "ZONE_OCEAN",
    "ZONE_ROCK",
    "data",
    "eval",
    "losses",
    "model",
    "train",
]
