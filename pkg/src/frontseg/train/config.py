"""Run configuration: dataclass, flat key-value files, and model profiles."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from pathlib import Path

from ..losses import LossWeights
from ..model import NetworkConfig
from ..validation import check_in

# Model size profiles: (input_size, context_dim, target_channels).
SCALES = {
    "paper": (224, 96, 32),
    "tiny": (112, 24, 8),
}

LR_SCHEDULES = ("exponential", "poly")


@dataclass
class TrainConfig:
    seed: int = 0
    scale: str = "tiny"
    hook_type: str = "esca"
    supervision: str = "cds"
    epochs: int = 20
    batch_size: int = 8
    lr0: float = 0.01
    lr_decay: float = 0.9
    lr_schedule: str = "exponential"
    momentum: float = 0.9
    weight_decay: float = 1e-4
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 0.5
    tau: float = 0.1
    anchors_per_class: int = 64
    max_negatives: int = 512
    embedding_dim: int = 64
    val_fraction: float = 0.1
    pretrained_weights: str = ""
    num_threads: int = 1

    def __post_init__(self):
        check_in(self.scale, SCALES, "scale")
        check_in(self.lr_schedule, LR_SCHEDULES, "lr_schedule")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must be in [0, 1), got {self.momentum}")
        if self.lr0 <= 0:
            raise ValueError(f"lr0 must be positive, got {self.lr0}")
        if self.epochs < 1 or self.batch_size < 1:
            raise ValueError("epochs and batch_size must be at least 1")
        if not 0.0 <= self.val_fraction < 1.0:
            raise ValueError(f"val_fraction must be in [0, 1), got {self.val_fraction}")
        self.network_config()  # validates hook_type/supervision/geometry

    @property
    def input_size(self):
        return SCALES[self.scale][0]

    def network_config(self):
        input_size, context_dim, target_channels = SCALES[self.scale]
        return NetworkConfig(
            input_size=input_size,
            context_dim=context_dim,
            target_channels=target_channels,
            hook_type=self.hook_type,
            supervision=self.supervision,
            embedding_dim=self.embedding_dim,
        )

    def loss_weights(self):
        return LossWeights(
            lambda1=self.lambda1,
            lambda2=self.lambda2,
            lambda3=self.lambda3,
            tau=self.tau,
            anchors_per_class=self.anchors_per_class,
            max_negatives=self.max_negatives,
        )

    def learning_rate(self, epoch):
        """Closed-form learning rate for a zero-based epoch index."""
        if self.lr_schedule == "exponential":
            return self.lr0 * self.lr_decay**epoch
        return self.lr0 * (1.0 - epoch / self.epochs) ** 0.9

    def to_dict(self):
        return dataclasses.asdict(self)


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(TrainConfig)}


def _coerce(name, raw):
    if name not in _FIELD_TYPES:
        known = ", ".join(sorted(_FIELD_TYPES))
        raise ValueError(f"unknown config key {name!r}; known keys: {known}")
    kind = _FIELD_TYPES[name]
    raw = str(raw).strip()
    if kind == "int" or kind is int:
        return int(raw)
    if kind == "float" or kind is float:
        return float(raw)
    return raw


def config_from_mapping(mapping):
    return TrainConfig(**{k: _coerce(k, v) for k, v in mapping.items()})


def load_config(path):
    """Read a flat ``key = value`` text file ('#' starts a comment)."""
    mapping = {}
    for line_no, line in enumerate(Path(path).read_text().splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{line_no}: expected 'key = value', got {line!r}")
        key, value = stripped.split("=", 1)
        mapping[key.strip()] = value.strip()
    return config_from_mapping(mapping)


def save_config(cfg, path):
    lines = [f"{key} = {value}" for key, value in cfg.to_dict().items()]
    Path(path).write_text("\n".join(lines) + "\n")


def apply_overrides(cfg, overrides):
    """New config with string overrides applied on top of ``cfg``."""
    data = cfg.to_dict()
    for key, value in overrides.items():
        data[key] = _coerce(key, value)
    return TrainConfig(**data)
