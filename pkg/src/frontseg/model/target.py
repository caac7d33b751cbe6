"""Convolutional U-shaped branch over the high-resolution center view.

Encoder widths double per level until the bottleneck, which widens by
another 1.25x instead of 2x; the decoder mirrors the encoder with
transposed-conv upsampling and skip concatenation.  The two coarsest
feature maps (bottleneck and first decoder block output) are exposed for
cross-branch fusion, and fused replacements can be injected back in their
place.
"""

from __future__ import annotations

from dataclasses import dataclass

import torch
import torch.nn as nn

TAP_DEEP = "deep"
TAP_FINE = "fine"


@dataclass(frozen=True)
class TargetConfig:
    input_size: int = 224
    in_channels: int = 3
    base_channels: int = 32
    num_levels: int = 5
    num_classes: int = 4

    def __post_init__(self):
        if self.num_levels < 2:
            raise ValueError(f"need at least 2 levels, got {self.num_levels}")
        stride = 2 ** (self.num_levels - 1)
        if self.input_size % stride:
            raise ValueError(
                f"input_size {self.input_size} not divisible by total stride {stride}"
            )
        if (5 * self.base_channels * 2 ** (self.num_levels - 2)) % 4:
            raise ValueError(
                f"base_channels {self.base_channels} gives a fractional bottleneck width"
            )

    @property
    def widths(self):
        """Per-level channel widths, encoder order (last is the bottleneck)."""
        doubling = [self.base_channels * 2**j for j in range(self.num_levels - 1)]
        return tuple(doubling + [doubling[-1] * 5 // 4])

    def resolution_at(self, level):
        return self.input_size // 2**level

    @property
    def tap_channels(self):
        return {TAP_DEEP: self.widths[-1], TAP_FINE: self.widths[-2]}

    @property
    def tap_resolutions(self):
        return {
            TAP_DEEP: self.resolution_at(self.num_levels - 1),
            TAP_FINE: self.resolution_at(self.num_levels - 2),
        }


class ConvBlock(nn.Module):
    """Two units of 3x3 conv -> BatchNorm -> ReLU."""

    def __init__(self, in_channels, out_channels):
        super().__init__()
        layers = []
        for i in range(2):
            layers += [
                nn.Conv2d(
                    in_channels if i == 0 else out_channels,
                    out_channels,
                    kernel_size=3,
                    padding=1,
                    bias=False,
                ),
                nn.BatchNorm2d(out_channels),
                nn.ReLU(inplace=True),
            ]
        self.body = nn.Sequential(*layers)

    def forward(self, x):
        return self.body(x)


def _note(trace, name, tensor):
    if trace is not None:
        _, c, h, w = tensor.shape
        trace.append((name, (h, w, c)))


def _check_injection(tensor, channels, resolution, name):
    expected = (channels, resolution, resolution)
    if tuple(tensor.shape[1:]) != expected:
        raise ValueError(
            f"injected {name} feature has shape {tuple(tensor.shape[1:])}, expected {expected}"
        )


class TargetBranch(nn.Module):
    """Center-view branch with staged forward for cross-branch fusion.

    ``encode`` returns (bottleneck, skips); ``decode_first`` consumes the
    (possibly replaced) bottleneck and yields the first decoder feature;
    ``decode_rest`` finishes the decoder; ``classify`` applies the 1x1 head.
    """

    def __init__(self, cfg):
        super().__init__()
        self.cfg = cfg
        widths = cfg.widths

        self.encoder_blocks = nn.ModuleList()
        in_ch = cfg.in_channels
        for level in range(cfg.num_levels - 1):
            self.encoder_blocks.append(ConvBlock(in_ch, widths[level]))
            in_ch = widths[level]
        self.pool = nn.MaxPool2d(2)
        self.bottleneck = ConvBlock(widths[-2], widths[-1])

        self.upsamplers = nn.ModuleList()
        self.decoder_blocks = nn.ModuleList()
        up_in = widths[-1]
        for level in range(cfg.num_levels - 2, -1, -1):
            self.upsamplers.append(
                nn.ConvTranspose2d(up_in, widths[level], kernel_size=2, stride=2)
            )
            self.decoder_blocks.append(ConvBlock(2 * widths[level], widths[level]))
            up_in = widths[level]
        self.head = nn.Conv2d(widths[0], cfg.num_classes, kernel_size=1)

    def encode(self, x, trace=None):
        expected = (self.cfg.in_channels, self.cfg.input_size, self.cfg.input_size)
        if tuple(x.shape[1:]) != expected:
            raise ValueError(f"expected input {expected}, got {tuple(x.shape[1:])}")
        skips = []
        for level, block in enumerate(self.encoder_blocks):
            x = block(x)
            skips.append(x)
            _note(trace, f"encoder_block{level + 1}", x)
            x = self.pool(x)
        x = self.bottleneck(x)
        _note(trace, "bottleneck_block", x)
        return x, skips

    def _decode_step(self, i, x, skips):
        x = self.upsamplers[i](x)
        skip = skips[len(skips) - 1 - i]
        return self.decoder_blocks[i](torch.cat([skip, x], dim=1))

    def decode_first(self, bottleneck, skips, trace=None):
        _check_injection(
            bottleneck,
            self.cfg.tap_channels[TAP_DEEP],
            self.cfg.tap_resolutions[TAP_DEEP],
            TAP_DEEP,
        )
        x = self._decode_step(0, bottleneck, skips)
        _note(trace, "decoder_block1", x)
        return x

    def decode_rest(self, first_decoded, skips, trace=None):
        _check_injection(
            first_decoded,
            self.cfg.tap_channels[TAP_FINE],
            self.cfg.tap_resolutions[TAP_FINE],
            TAP_FINE,
        )
        x = first_decoded
        for i in range(1, len(self.decoder_blocks)):
            x = self._decode_step(i, x, skips)
            _note(trace, f"decoder_block{i + 1}", x)
        return x

    def classify(self, x, trace=None):
        x = self.head(x)
        _note(trace, "head", x)
        return x

    def forward(self, x, hooked=None, trace=None):
        """Full pass; ``hooked`` optionally replaces the two tap features."""
        hooked = hooked or {}
        unknown = set(hooked) - {TAP_DEEP, TAP_FINE}
        if unknown:
            raise ValueError(f"unknown hook injection keys {sorted(unknown)}")

        bottleneck, skips = self.encode(x, trace=trace)
        taps = {TAP_DEEP: bottleneck}
        first = self.decode_first(hooked.get(TAP_DEEP, bottleneck), skips, trace=trace)
        taps[TAP_FINE] = first
        features = self.decode_rest(hooked.get(TAP_FINE, first), skips, trace=trace)
        logits = self.classify(features, trace=trace)
        return logits, taps
