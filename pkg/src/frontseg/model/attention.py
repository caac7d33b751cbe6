"""Windowed multi-head self-attention with relative position bias.

Token grids are partitioned into non-overlapping square windows; attention
runs independently per window.  Shifted variants cyclically roll the grid
by half a window first and mask logits between tokens that were not
neighbors before the roll.
"""

from __future__ import annotations

import math

import torch
import torch.nn as nn
import torch.nn.functional as F


def scaled_dot_attention(q, k, v, bias=None):
    """Softmax(q kᵀ / sqrt(d_k) + bias) v over the last two dims.

    q, k: (..., n, d_k); v: (..., n, d_v); bias broadcastable to (..., n, n).
    """
    if q.shape[-1] != k.shape[-1]:
        raise ValueError(f"q/k depth mismatch: {q.shape[-1]} vs {k.shape[-1]}")
    logits = q @ k.transpose(-2, -1) / math.sqrt(q.shape[-1])
    if bias is not None:
        logits = logits + bias
    return torch.softmax(logits, dim=-1) @ v


def window_partition(x, window):
    """(B, H, W, C) -> (B * nWindows, window*window, C)."""
    b, h, w, c = x.shape
    if h % window or w % window:
        raise ValueError(f"grid {(h, w)} not divisible by window {window}")
    x = x.view(b, h // window, window, w // window, window, c)
    return x.permute(0, 1, 3, 2, 4, 5).reshape(-1, window * window, c)


def window_reverse(windows, window, h, w):
    """Inverse of :func:`window_partition`."""
    b = windows.shape[0] // ((h // window) * (w // window))
    x = windows.view(b, h // window, w // window, window, window, -1)
    return x.permute(0, 1, 3, 2, 4, 5).reshape(b, h, w, -1)


def relative_position_index(window):
    """Index into the (2w-1)^2 bias table for every token pair in a window."""
    coords = torch.stack(
        torch.meshgrid(torch.arange(window), torch.arange(window), indexing="ij")
    )
    flat = coords.flatten(1)
    relative = flat[:, :, None] - flat[:, None, :]
    relative = relative.permute(1, 2, 0).contiguous()
    relative[:, :, 0] += window - 1
    relative[:, :, 1] += window - 1
    relative[:, :, 0] *= 2 * window - 1
    return relative.sum(-1)


def shift_attention_mask(grid_size, window, shift):
    """(nWindows, n, n) additive mask with -inf across post-shift seams."""
    h, w = grid_size
    img_mask = torch.zeros(1, h, w, 1)
    slices = (slice(0, -window), slice(-window, -shift), slice(-shift, None))
    region = 0
    for hs in slices:
        for ws in slices:
            img_mask[:, hs, ws, :] = region
            region += 1
    windows = window_partition(img_mask, window).squeeze(-1)
    mask = windows.unsqueeze(1) - windows.unsqueeze(2)
    return mask.masked_fill(mask != 0, float("-inf")).masked_fill(mask == 0, 0.0)


class WindowAttention(nn.Module):
    """Multi-head attention inside one window, with learned relative bias."""

    def __init__(self, dim, window, num_heads, qkv_bias=True):
        super().__init__()
        if dim % num_heads:
            raise ValueError(f"dim {dim} not divisible by num_heads {num_heads}")
        self.dim = dim
        self.window = window
        self.num_heads = num_heads
        self.qkv = nn.Linear(dim, dim * 3, bias=qkv_bias)
        self.proj = nn.Linear(dim, dim)
        # Zero-initialized bias keeps attention exactly uniform on constant
        # keys at initialization.
        self.relative_position_bias_table = nn.Parameter(
            torch.zeros((2 * window - 1) ** 2, num_heads)
        )
        self.register_buffer(
            "relative_index", relative_position_index(window), persistent=False
        )

    def forward(self, x, mask=None):
        bw, n, c = x.shape
        qkv = (
            self.qkv(x)
            .reshape(bw, n, 3, self.num_heads, c // self.num_heads)
            .permute(2, 0, 3, 1, 4)
        )
        q, k, v = qkv.unbind(0)  # each (bw, heads, n, head_dim)

        bias = self.relative_position_bias_table[self.relative_index.view(-1)]
        bias = bias.view(n, n, self.num_heads).permute(2, 0, 1).unsqueeze(0)
        if mask is not None:
            nw = mask.shape[0]
            logits_bias = bias + mask.to(x.dtype).unsqueeze(1).repeat_interleave(
                bw // nw, dim=0
            ).view(bw, 1, n, n)
        else:
            logits_bias = bias

        out = scaled_dot_attention(q, k, v, bias=logits_bias)
        out = out.transpose(1, 2).reshape(bw, n, c)
        return self.proj(out)


class TokenMlp(nn.Module):
    """Two-layer GELU MLP applied token-wise."""

    def __init__(self, dim, ratio=4.0):
        super().__init__()
        hidden = int(dim * ratio)
        self.fc1 = nn.Linear(dim, hidden)
        self.fc2 = nn.Linear(hidden, dim)

    def forward(self, x):
        return self.fc2(F.gelu(self.fc1(x)))


class SwinBlock(nn.Module):
    """Pre-norm windowed attention block, optionally with a cyclic shift."""

    def __init__(self, dim, grid_size, num_heads, window=7, shift=0, mlp_ratio=4.0):
        super().__init__()
        h, w = grid_size
        if h % window or w % window:
            raise ValueError(f"grid {grid_size} not divisible by window {window}")
        # A single-window grid has no seams to shift across.
        if min(h, w) == window:
            shift = 0
        self.grid_size = (h, w)
        self.window = window
        self.shift = shift
        self.norm1 = nn.LayerNorm(dim)
        self.attn = WindowAttention(dim, window, num_heads)
        self.norm2 = nn.LayerNorm(dim)
        self.mlp = TokenMlp(dim, mlp_ratio)
        if shift:
            mask = shift_attention_mask(grid_size, window, shift)
        else:
            mask = None
        self.register_buffer("attn_mask", mask, persistent=False)

    def forward(self, x):
        # x: (B, H*W, C)
        h, w = self.grid_size
        b, n, c = x.shape
        if n != h * w:
            raise ValueError(f"expected {h * w} tokens for grid {self.grid_size}, got {n}")

        shortcut = x
        x = self.norm1(x).view(b, h, w, c)
        if self.shift:
            x = torch.roll(x, shifts=(-self.shift, -self.shift), dims=(1, 2))
        windows = window_partition(x, self.window)
        windows = self.attn(windows, mask=self.attn_mask)
        x = window_reverse(windows, self.window, h, w)
        if self.shift:
            x = torch.roll(x, shifts=(self.shift, self.shift), dims=(1, 2))
        x = shortcut + x.view(b, n, c)
        return x + self.mlp(self.norm2(x))


class SwinBlockPair(nn.Module):
    """A regular block followed by its shifted twin."""

    def __init__(self, dim, grid_size, num_heads, window=7, mlp_ratio=4.0):
        super().__init__()
        self.regular = SwinBlock(dim, grid_size, num_heads, window, 0, mlp_ratio)
        self.shifted = SwinBlock(dim, grid_size, num_heads, window, window // 2, mlp_ratio)

    def forward(self, x):
        return self.shifted(self.regular(x))
