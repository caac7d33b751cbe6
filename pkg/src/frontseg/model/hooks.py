"""Cross-branch feature fusion blocks.

Every hook consumes a wide-view feature map (twice the spatial size of the
center-view map), center-crops it, concatenates the two maps channel-wise,
applies its attention mechanism, and projects to the width expected by the
following decoder block.  All variants share this interface so they can be
swapped by configuration.
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn

HOOK_TYPES = ("esca", "sa", "senet", "cbam")


def center_crop_half(x):
    """Crop the central half extent: (B, C, 2h, 2w) -> (B, C, h, w)."""
    _, _, h, w = x.shape
    if h % 2 or w % 2:
        raise ValueError(f"cannot halve odd spatial dims {(h, w)}")
    top, left = h // 4, w // 4
    return x[:, :, top : top + h // 2, left : left + w // 2]


def combine_features(context_feature, target_feature):
    """Center-crop the context map and concatenate channel-wise."""
    cropped = center_crop_half(context_feature)
    if cropped.shape[2:] != target_feature.shape[2:]:
        raise ValueError(
            f"context crop {tuple(cropped.shape[2:])} does not match "
            f"target {tuple(target_feature.shape[2:])}"
        )
    return torch.cat([cropped, target_feature], dim=1)


class _HookBase(nn.Module):
    """Shared geometry bookkeeping and output projection."""

    def __init__(self, context_channels, target_channels, out_channels):
        super().__init__()
        self.context_channels = context_channels
        self.target_channels = target_channels
        self.combined_channels = context_channels + target_channels
        self.out_channels = out_channels
        self.project = nn.Conv2d(self.combined_channels, out_channels, 1, bias=False)

    def combine(self, context_feature, target_feature):
        if context_feature.shape[1] != self.context_channels:
            raise ValueError(
                f"context feature has {context_feature.shape[1]} channels, "
                f"expected {self.context_channels}"
            )
        if target_feature.shape[1] != self.target_channels:
            raise ValueError(
                f"target feature has {target_feature.shape[1]} channels, "
                f"expected {self.target_channels}"
            )
        return combine_features(context_feature, target_feature)


class EscaHook(_HookBase):
    """Per-channel spatial attention followed by a learned channel gate.

    Depth-wise 3x3 convolutions derive q, k, v from the combined map, so no
    channel mixing happens before the gate; each channel attends over its
    own spatial positions only.  The attention output enters through a
    residual scaled by theta (zero at init, so the block starts as an exact
    pass-through into the channel gate).  The gate softmaxes a free
    parameter U over channels per position and multiplies element-wise;
    a bias-free 1x1 convolution produces the final projection.
    """

    # Peak memory of the (C, N, N) attention logits is bounded by chunking
    # over channels.
    max_attention_elements = 2**24

    def __init__(self, context_channels, target_channels, out_channels, spatial_size,
                 scale_dim=None):
        super().__init__(context_channels, target_channels, out_channels)
        c = self.combined_channels
        self.spatial_size = int(spatial_size)
        self.scale_dim = int(scale_dim) if scale_dim else c
        self.dw_q = nn.Conv2d(c, c, 3, padding=1, groups=c, bias=False)
        self.dw_k = nn.Conv2d(c, c, 3, padding=1, groups=c, bias=False)
        self.dw_v = nn.Conv2d(c, c, 3, padding=1, groups=c, bias=False)
        self.theta = nn.Parameter(torch.zeros(()))
        self.channel_gate_logits = nn.Parameter(
            torch.zeros(self.spatial_size * self.spatial_size, c)
        )

    def spatial_attention(self, combined):
        """S = M + theta * per-channel Softmax(q kᵀ / sqrt(d)) v."""
        b, c, h, w = combined.shape
        n = h * w
        q = self.dw_q(combined).reshape(b, c, n)
        k = self.dw_k(combined).reshape(b, c, n)
        v = self.dw_v(combined).reshape(b, c, n)

        chunk = max(1, self.max_attention_elements // max(n * n, 1))
        attended = []
        for start in range(0, c, chunk):
            sl = slice(start, start + chunk)
            logits = q[:, sl].unsqueeze(-1) * k[:, sl].unsqueeze(-2)
            logits = logits / math.sqrt(self.scale_dim)
            attended.append(torch.softmax(logits, dim=-1) @ v[:, sl].unsqueeze(-1))
        out = torch.cat(attended, dim=1).squeeze(-1).reshape(b, c, h, w)
        return combined + self.theta * out

    def channel_attention(self, spatial_out):
        """Element-wise gate: softmax over channels of U, per position."""
        b, c, h, w = spatial_out.shape
        gate = torch.softmax(self.channel_gate_logits, dim=-1)  # (N, C)
        gate = gate.t().reshape(1, c, h, w)
        return spatial_out * gate

    def forward(self, context_feature, target_feature):
        combined = self.combine(context_feature, target_feature)
        if combined.shape[2] != self.spatial_size:
            raise ValueError(
                f"combined map is {combined.shape[2]}px, hook built for {self.spatial_size}px"
            )
        return self.project(self.channel_attention(self.spatial_attention(combined)))


class SaHook(_HookBase):
    """Single spatial self-attention over the combined map, all channels."""

    def __init__(self, context_channels, target_channels, out_channels):
        super().__init__(context_channels, target_channels, out_channels)
        c = self.combined_channels
        self.to_q = nn.Conv2d(c, c, 1, bias=False)
        self.to_k = nn.Conv2d(c, c, 1, bias=False)
        self.to_v = nn.Conv2d(c, c, 1, bias=False)

    def forward(self, context_feature, target_feature):
        combined = self.combine(context_feature, target_feature)
        b, c, h, w = combined.shape
        q = self.to_q(combined).flatten(2).transpose(1, 2)  # (B, N, C)
        k = self.to_k(combined).flatten(2).transpose(1, 2)
        v = self.to_v(combined).flatten(2).transpose(1, 2)
        attn = torch.softmax(q @ k.transpose(1, 2) / math.sqrt(c), dim=-1)
        out = (attn @ v).transpose(1, 2).reshape(b, c, h, w)
        return self.project(combined + out)


class SenetHook(_HookBase):
    """Global-average squeeze and two-layer excitation gate per channel."""

    def __init__(self, context_channels, target_channels, out_channels, reduction=16):
        super().__init__(context_channels, target_channels, out_channels)
        c = self.combined_channels
        hidden = max(c // reduction, 4)
        self.excite = nn.Sequential(
            nn.Linear(c, hidden), nn.ReLU(inplace=True), nn.Linear(hidden, c), nn.Sigmoid()
        )

    def forward(self, context_feature, target_feature):
        combined = self.combine(context_feature, target_feature)
        gate = self.excite(combined.mean(dim=(2, 3)))
        return self.project(combined * gate[:, :, None, None])


class CbamHook(_HookBase):
    """Channel gate (avg+max pooled shared MLP) then a 7x7 spatial gate."""

    def __init__(self, context_channels, target_channels, out_channels, reduction=16):
        super().__init__(context_channels, target_channels, out_channels)
        c = self.combined_channels
        hidden = max(c // reduction, 4)
        self.channel_mlp = nn.Sequential(
            nn.Linear(c, hidden), nn.ReLU(inplace=True), nn.Linear(hidden, c)
        )
        self.spatial_conv = nn.Conv2d(2, 1, kernel_size=7, padding=3, bias=False)

    def channel_gate(self, x):
        avg = self.channel_mlp(x.mean(dim=(2, 3)))
        peak = self.channel_mlp(x.amax(dim=(2, 3)))
        return torch.sigmoid(avg + peak)[:, :, None, None]

    def spatial_gate(self, x):
        stacked = torch.cat(
            [x.mean(dim=1, keepdim=True), x.amax(dim=1, keepdim=True)], dim=1
        )
        return torch.sigmoid(self.spatial_conv(stacked))

    def forward(self, context_feature, target_feature):
        combined = self.combine(context_feature, target_feature)
        gated = combined * self.channel_gate(combined)
        gated = gated * self.spatial_gate(gated)
        return self.project(gated)


def make_hook(kind, context_channels, target_channels, out_channels, spatial_size):
    """Build a fusion hook by configuration name."""
    if kind == "esca":
        return EscaHook(context_channels, target_channels, out_channels, spatial_size)
    if kind == "sa":
        return SaHook(context_channels, target_channels, out_channels)
    if kind == "senet":
        return SenetHook(context_channels, target_channels, out_channels)
    if kind == "cbam":
        return CbamHook(context_channels, target_channels, out_channels)
    raise ValueError(f"unknown hook type {kind!r}; known: {HOOK_TYPES}")
