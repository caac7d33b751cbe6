"""The combined two-branch network with cross-branch fusion hooks.

The wide-view branch processes the downsampled context window while the
convolutional branch processes the center crop at full resolution.  The
context decoder's two finest feature grids are fused into the target
decoder at the matching depths: the fused bottleneck replacement feeds the
first decoder block, and the fused first-decoder replacement feeds the
second.  Optional supervision heads hang off the fused features.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field

import torch.nn as nn

from .context import ContextBranch, ContextConfig
from .hooks import HOOK_TYPES, make_hook
from .target import TAP_DEEP, TAP_FINE, TargetBranch, TargetConfig

SUPERVISION_MODES = ("none", "ds", "cds")
HOOK_CHOICES = HOOK_TYPES + ("none",)
HOOK_DEPTHS = (TAP_DEEP, TAP_FINE)


@dataclass(frozen=True)
class NetworkConfig:
    """Geometry and wiring of the full two-branch model.

    ``input_size`` is the side length of the target (center) patch; the
    context patch covers twice the extent but arrives at the same raster
    size.  ``hook_type`` "none" drops the context branch and fusion
    entirely, leaving a plain convolutional U-Net.
    """

    input_size: int = 224
    context_dim: int = 96
    target_channels: int = 32
    patch_size: int = 4
    window: int = 7
    in_channels: int = 3
    num_classes: int = 4
    hook_type: str = "esca"
    supervision: str = "none"
    embedding_dim: int = 64
    context_depths: tuple = None
    context_heads: tuple = None
    mlp_ratio: float = 4.0

    def __post_init__(self):
        if self.hook_type not in HOOK_CHOICES:
            raise ValueError(f"hook_type must be one of {HOOK_CHOICES}, got {self.hook_type!r}")
        if self.supervision not in SUPERVISION_MODES:
            raise ValueError(
                f"supervision must be one of {SUPERVISION_MODES}, got {self.supervision!r}"
            )
        if self.hook_type == "none" and self.supervision != "none":
            raise ValueError("supervision heads require fusion hooks (hook_type != none)")
        self.context_config()  # validates geometry
        self.target_config()

    def context_config(self):
        return ContextConfig(
            input_size=self.input_size,
            in_channels=self.in_channels,
            patch_size=self.patch_size,
            window=self.window,
            embed_dim=self.context_dim,
            depths=self.context_depths,
            heads=self.context_heads,
            mlp_ratio=self.mlp_ratio,
            num_classes=self.num_classes,
        )

    def target_config(self):
        # The target bottleneck must sit at half the context deep-hook grid
        # (a quarter of the context token grid) so the center-cropped
        # context features line up with the target taps at both depths.
        ctx_grid = self.input_size // self.patch_size
        levels = 1
        size = self.input_size
        while size > ctx_grid // 4:
            size //= 2
            levels += 1
        if size != ctx_grid // 4:
            raise ValueError(
                f"input_size {self.input_size} and patch_size {self.patch_size} "
                "do not align the two branches"
            )
        return TargetConfig(
            input_size=self.input_size,
            in_channels=self.in_channels,
            base_channels=self.target_channels,
            num_levels=levels,
            num_classes=self.num_classes,
        )


def network_config_to_dict(cfg):
    out = dataclasses.asdict(cfg)
    for key in ("context_depths", "context_heads"):
        if out[key] is not None:
            out[key] = list(out[key])
    return out


def network_config_from_dict(data):
    kwargs = dict(data)
    for key in ("context_depths", "context_heads"):
        if kwargs.get(key) is not None:
            kwargs[key] = tuple(kwargs[key])
    return NetworkConfig(**kwargs)


@dataclass
class ModelOutput:
    target_logits: object
    context_logits: object = None
    fused: dict = field(default_factory=dict)
    taps: dict = field(default_factory=dict)


class TwoBranchNet(nn.Module):
    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg
        tcfg = cfg.target_config()
        self.target = TargetBranch(tcfg)

        if cfg.hook_type == "none":
            self.context = None
            self.hooks = None
        else:
            ccfg = cfg.context_config()
            self.context = ContextBranch(ccfg)
            context_widths = {TAP_DEEP: 2 * cfg.context_dim, TAP_FINE: cfg.context_dim}
            self.hooks = nn.ModuleDict(
                {
                    depth: make_hook(
                        cfg.hook_type,
                        context_widths[depth],
                        tcfg.tap_channels[depth],
                        tcfg.tap_channels[depth],
                        tcfg.tap_resolutions[depth],
                    )
                    for depth in HOOK_DEPTHS
                }
            )

        heads = None
        if cfg.supervision == "cds":
            heads = {
                depth: nn.Conv2d(tcfg.tap_channels[depth], cfg.embedding_dim, 1)
                for depth in HOOK_DEPTHS
            }
        elif cfg.supervision == "ds":
            heads = {
                depth: nn.Conv2d(tcfg.tap_channels[depth], cfg.num_classes, 1)
                for depth in HOOK_DEPTHS
            }
        self.supervision_heads = nn.ModuleDict(heads) if heads else None

    def forward(self, target_image, context_image=None, trace=None):
        if self.context is None:
            logits, taps = self.target(target_image, trace=trace)
            return ModelOutput(target_logits=logits, taps=taps)

        if context_image is None:
            raise ValueError("this configuration needs a context image")
        context_logits, context_features = self.context(context_image, trace=trace)

        bottleneck, skips = self.target.encode(target_image, trace=trace)
        fused_deep = self.hooks[TAP_DEEP](context_features[TAP_DEEP], bottleneck)
        first = self.target.decode_first(fused_deep, skips, trace=trace)
        fused_fine = self.hooks[TAP_FINE](context_features[TAP_FINE], first)
        features = self.target.decode_rest(fused_fine, skips, trace=trace)
        logits = self.target.classify(features, trace=trace)

        return ModelOutput(
            target_logits=logits,
            context_logits=context_logits,
            fused={TAP_DEEP: fused_deep, TAP_FINE: fused_fine},
            taps={TAP_DEEP: bottleneck, TAP_FINE: first},
        )


def load_pretrained_context(net, checkpoint):
    """Copy matching context-branch weights from another checkpoint.

    Keys prefixed ``context.`` whose shapes agree are copied; everything
    else is left at its current value.  Returns (copied, skipped) key lists.
    """
    if net.context is None:
        raise ValueError("this configuration has no context branch to initialize")
    state = net.state_dict()
    copied, skipped = [], []
    for name, array in checkpoint.tensors.items():
        if not name.startswith("context."):
            continue
        if name in state and tuple(state[name].shape) == tuple(array.shape):
            state[name] = state[name].new_tensor(array)
            copied.append(name)
        else:
            skipped.append(name)
    net.load_state_dict(state)
    return copied, skipped
