"""U-shaped windowed-attention branch over the wide, downsampled view.

The encoder halves the token grid and doubles the channel width between
stages; the decoder mirrors it with patch expansion and concatenation skip
connections.  Besides full-resolution class logits the branch hands out the
two finest decoder feature grids for cross-branch fusion.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn

from .attention import SwinBlockPair


def _is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class ContextConfig:
    input_size: int = 224
    in_channels: int = 3
    patch_size: int = 4
    window: int = 7
    embed_dim: int = 96
    depths: tuple = None
    heads: tuple = None
    mlp_ratio: float = 4.0
    num_classes: int = 4

    def __post_init__(self):
        if self.input_size % self.patch_size:
            raise ValueError(
                f"input_size {self.input_size} not divisible by patch_size {self.patch_size}"
            )
        grid = self.input_size // self.patch_size
        if grid % self.window or not _is_power_of_two(grid // self.window):
            raise ValueError(
                f"token grid {grid} must be window*2^k for window {self.window}"
            )
        if len(self.stage_depths) != self.num_levels:
            raise ValueError(f"need {self.num_levels} stage depths, got {self.depths}")
        if any(d <= 0 or d % 2 for d in self.stage_depths):
            raise ValueError(f"stage depths must be positive and even, got {self.depths}")
        for level, h in enumerate(self.stage_heads):
            if self.dim_at(level) % h:
                raise ValueError(
                    f"stage {level} width {self.dim_at(level)} not divisible by {h} heads"
                )

    @property
    def base_grid(self):
        return self.input_size // self.patch_size

    @property
    def num_levels(self):
        grid = self.base_grid
        levels = 1
        while grid > self.window:
            grid //= 2
            levels += 1
        return levels

    @property
    def stage_depths(self):
        return self.depths if self.depths else (2,) * self.num_levels

    @property
    def stage_heads(self):
        return self.heads if self.heads else tuple(3 * 2**j for j in range(self.num_levels))

    def grid_at(self, level):
        return self.base_grid // 2**level

    def dim_at(self, level):
        return self.embed_dim * 2**level


class PatchEmbed(nn.Module):
    """Non-overlapping patches linearly projected to the embedding width."""

    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg
        self.proj = nn.Conv2d(
            cfg.in_channels, cfg.embed_dim, kernel_size=cfg.patch_size, stride=cfg.patch_size
        )
        self.norm = nn.LayerNorm(cfg.embed_dim)

    def forward(self, x):
        expected = (self.cfg.in_channels, self.cfg.input_size, self.cfg.input_size)
        if tuple(x.shape[1:]) != expected:
            raise ValueError(f"expected input {expected}, got {tuple(x.shape[1:])}")
        x = self.proj(x).flatten(2).transpose(1, 2)  # (B, N, C)
        return self.norm(x)


class PatchMerging(nn.Module):
    """2x2 token concatenation followed by a linear halving of the result."""

    def __init__(self, dim, grid):
        super().__init__()
        if grid % 2:
            raise ValueError(f"cannot merge an odd token grid ({grid})")
        self.dim = dim
        self.grid = grid
        self.norm = nn.LayerNorm(4 * dim)
        self.reduction = nn.Linear(4 * dim, 2 * dim, bias=False)

    def forward(self, x):
        b, n, c = x.shape
        g = self.grid
        x = x.view(b, g, g, c)
        x = torch.cat(
            [x[:, 0::2, 0::2], x[:, 1::2, 0::2], x[:, 0::2, 1::2], x[:, 1::2, 1::2]], -1
        )
        x = x.view(b, (g // 2) * (g // 2), 4 * c)
        return self.reduction(self.norm(x))


class PatchExpand(nn.Module):
    """Double the token grid, halving the channel width."""

    def __init__(self, dim, grid):
        super().__init__()
        self.dim = dim
        self.grid = grid
        self.expand = nn.Linear(dim, 2 * dim, bias=False)
        self.norm = nn.LayerNorm(dim // 2)

    def forward(self, x):
        b, n, c = x.shape
        g = self.grid
        x = self.expand(x).view(b, g, g, 2, 2, c // 2)
        x = x.permute(0, 1, 3, 2, 4, 5).reshape(b, (2 * g) * (2 * g), c // 2)
        return self.norm(x)


class FinalPatchExpand(nn.Module):
    """Expand tokens back to pixel resolution, keeping the channel width."""

    def __init__(self, dim, grid, scale):
        super().__init__()
        self.dim = dim
        self.grid = grid
        self.scale = scale
        self.expand = nn.Linear(dim, scale * scale * dim, bias=False)
        self.norm = nn.LayerNorm(dim)

    def forward(self, x):
        b, n, c = x.shape
        g, s = self.grid, self.scale
        x = self.expand(x).view(b, g, g, s, s, c)
        x = x.permute(0, 1, 3, 2, 4, 5).reshape(b, (g * s) * (g * s), c)
        return self.norm(x)


def _tokens_to_map(x, grid):
    b, n, c = x.shape
    return x.transpose(1, 2).reshape(b, c, grid, grid)


class ContextBranch(nn.Module):
    """Wide-view branch: class logits plus the two finest decoder features.

    Feature maps come back as a dict with keys "deep" (half target grid,
    2x embedding width) and "fine" (full target grid, embedding width).
    """

    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg
        levels = cfg.num_levels
        depths, heads = cfg.stage_depths, cfg.stage_heads

        self.patch_embed = PatchEmbed(cfg)
        self.encoder_stages = nn.ModuleList(
            self._stage(cfg, level, depths[level], heads[level]) for level in range(levels)
        )
        self.merges = nn.ModuleList(
            PatchMerging(cfg.dim_at(level), cfg.grid_at(level)) for level in range(levels - 1)
        )

        dec_levels = list(range(levels - 2, -1, -1))
        self.expands = nn.ModuleList(
            PatchExpand(cfg.dim_at(level + 1), cfg.grid_at(level + 1)) for level in dec_levels
        )
        self.skip_fusions = nn.ModuleList(
            nn.Linear(2 * cfg.dim_at(level), cfg.dim_at(level)) for level in dec_levels
        )
        self.decoder_stages = nn.ModuleList(
            self._stage(cfg, level, depths[level], heads[level]) for level in dec_levels
        )
        self.final_expand = FinalPatchExpand(cfg.embed_dim, cfg.base_grid, cfg.patch_size)
        self.head = nn.Conv2d(cfg.embed_dim, cfg.num_classes, kernel_size=1)

    @staticmethod
    def _stage(cfg, level, depth, num_heads):
        grid = (cfg.grid_at(level), cfg.grid_at(level))
        return nn.Sequential(
            *[
                SwinBlockPair(cfg.dim_at(level), grid, num_heads, cfg.window, cfg.mlp_ratio)
                for _ in range(depth // 2)
            ]
        )

    def forward(self, x, trace=None):
        cfg = self.cfg
        levels = cfg.num_levels

        def note(name, grid, channels):
            if trace is not None:
                trace.append((name, (grid, grid, channels)))

        x = self.patch_embed(x)
        note("patch_embed", cfg.base_grid, cfg.embed_dim)

        skips = []
        for level in range(levels):
            x = self.encoder_stages[level](x)
            skips.append(x)
            note(f"encoder{level + 1}", cfg.grid_at(level), cfg.dim_at(level))
            if level < levels - 1:
                x = self.merges[level](x)

        decoder_features = {levels - 1: x}
        for i, level in enumerate(range(levels - 2, -1, -1)):
            x = self.expands[i](x)
            x = self.skip_fusions[i](torch.cat([x, skips[level]], dim=-1))
            x = self.decoder_stages[i](x)
            decoder_features[level] = x
            note(f"decoder{level + 1}", cfg.grid_at(level), cfg.dim_at(level))

        deep_level = min(1, levels - 1)
        hooks = {
            "deep": _tokens_to_map(decoder_features[deep_level], cfg.grid_at(deep_level)),
            "fine": _tokens_to_map(decoder_features[0], cfg.base_grid),
        }

        x = self.final_expand(x)
        note("patch_expand", cfg.input_size, cfg.embed_dim)
        logits = self.head(_tokens_to_map(x, cfg.input_size))
        note("projection", cfg.input_size, cfg.num_classes)
        return logits, hooks
