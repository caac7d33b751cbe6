import pytest
import torch

from frontseg.model import ContextBranch, ContextConfig


def tiny_cfg(**kw):
    base = dict(input_size=112, in_channels=3, patch_size=4, window=7, embed_dim=24)
    base.update(kw)
    return ContextConfig(**base)


def test_derived_schedule_paper_profile():
    cfg = ContextConfig(input_size=224, patch_size=4, window=7, embed_dim=96)
    assert cfg.base_grid == 56
    assert cfg.num_levels == 4
    assert cfg.stage_heads == (3, 6, 12, 24)
    assert [cfg.grid_at(j) for j in range(4)] == [56, 28, 14, 7]
    assert [cfg.dim_at(j) for j in range(4)] == [96, 192, 384, 768]


def test_derived_schedule_tiny_profile():
    cfg = tiny_cfg()
    assert cfg.base_grid == 28
    assert cfg.num_levels == 3
    assert [cfg.grid_at(j) for j in range(3)] == [28, 14, 7]
    assert [cfg.dim_at(j) for j in range(3)] == [24, 48, 96]


def test_config_rejects_bad_geometry():
    with pytest.raises(ValueError):
        tiny_cfg(input_size=100)  # not divisible by patch size * window chain
    with pytest.raises(ValueError):
        tiny_cfg(window=5)  # 28 never reaches 5 by halving
    with pytest.raises(ValueError):
        tiny_cfg(embed_dim=10)  # not divisible by the head count


def test_forward_output_shapes():
    cfg = tiny_cfg()
    branch = ContextBranch(cfg)
    x = torch.randn(2, 3, 112, 112)
    logits, hook_maps = branch(x)
    assert logits.shape == (2, 4, 112, 112)
    assert hook_maps["deep"].shape == (2, 48, 14, 14)
    assert hook_maps["fine"].shape == (2, 24, 28, 28)


def test_forward_trace_matches_declared_schedule():
    cfg = tiny_cfg()
    branch = ContextBranch(cfg)
    trace = []
    branch(torch.randn(1, 3, 112, 112), trace=trace)
    names = [name for name, _ in trace]
    assert names == [
        "patch_embed",
        "encoder1",
        "encoder2",
        "encoder3",
        "decoder2",
        "decoder1",
        "patch_expand",
        "projection",
    ]
    shapes = dict(trace)
    assert shapes["patch_embed"] == (28, 28, 24)
    assert shapes["encoder2"] == (14, 14, 48)
    assert shapes["encoder3"] == (7, 7, 96)
    assert shapes["decoder2"] == (14, 14, 48)
    assert shapes["decoder1"] == (28, 28, 24)
    assert shapes["patch_expand"] == (112, 112, 24)
    assert shapes["projection"] == (112, 112, 4)


def test_forward_rejects_wrong_input_size():
    branch = ContextBranch(tiny_cfg())
    with pytest.raises(ValueError):
        branch(torch.randn(1, 3, 96, 96))


def test_gradients_reach_embedding():
    cfg = tiny_cfg()
    branch = ContextBranch(cfg)
    x = torch.randn(1, 3, 112, 112)
    logits, _ = branch(x)
    logits.sum().backward()
    g = branch.patch_embed.proj.weight.grad
    assert g is not None
    assert float(g.abs().sum()) > 0
