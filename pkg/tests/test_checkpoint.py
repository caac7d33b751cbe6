import numpy as np
import pytest
import torch

from frontseg.model import (
    MAGIC,
    NetworkConfig,
    TwoBranchNet,
    load_checkpoint,
    load_into,
    save_checkpoint,
)


def small_net():
    cfg = NetworkConfig(
        input_size=56, context_dim=12, target_channels=8, patch_size=2, window=7
    )
    return TwoBranchNet(cfg)


def test_round_trip_is_bit_identical(tmp_path):
    net = small_net()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, net.state_dict(), {"network": {"input_size": 56}})
    ckpt = load_checkpoint(path)
    assert ckpt.config == {"network": {"input_size": 56}}
    for name, tensor in net.state_dict().items():
        stored = ckpt.tensors[name]
        assert stored.shape == tuple(tensor.shape)
        assert np.array_equal(stored, tensor.detach().numpy().astype(np.float32))


def test_rank_zero_tensors_round_trip(tmp_path):
    path = tmp_path / "s.ckpt"
    state = {"scalar": torch.tensor(2.5), "count": torch.tensor(7, dtype=torch.int64)}
    save_checkpoint(path, state, {})
    ckpt = load_checkpoint(path)
    assert ckpt.tensors["scalar"].shape == ()
    assert ckpt.tensors["count"].shape == ()
    assert ckpt.tensors["scalar"] == 2.5


def test_load_into_restores_state(tmp_path):
    net = small_net()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, net.state_dict(), {})
    other = small_net()
    load_into(other, load_checkpoint(path))
    for (na, a), (nb, b) in zip(
        net.state_dict().items(), other.state_dict().items()
    ):
        assert na == nb
        assert torch.equal(a.float(), b.float()), na


def test_load_into_preserves_integer_dtypes(tmp_path):
    net = small_net()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, net.state_dict(), {})
    other = small_net()
    load_into(other, load_checkpoint(path))
    for name, tensor in other.state_dict().items():
        assert tensor.dtype == net.state_dict()[name].dtype, name


def test_load_into_rejects_shape_mismatch_with_both_signatures(tmp_path):
    net = small_net()
    path = tmp_path / "model.ckpt"
    save_checkpoint(path, net.state_dict(), {})
    wrong = TwoBranchNet(
        NetworkConfig(input_size=56, context_dim=12, target_channels=4, patch_size=2, window=7)
    )
    with pytest.raises(ValueError) as err:
        load_into(wrong, load_checkpoint(path))
    message = str(err.value)
    assert "model signature" in message
    assert "checkpoint signature" in message


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.ckpt"
    path.write_bytes(b"NOTMAGIC" + b"\x00" * 32)
    with pytest.raises(ValueError):
        load_checkpoint(path)


def test_magic_is_stable():
    assert MAGIC == b"FSCKPT01"


def test_config_block_survives_nested_dicts(tmp_path):
    config = {"network": {"hook_type": "esca", "depths": [2, 2]}, "train": {"seed": 3}}
    path = tmp_path / "c.ckpt"
    save_checkpoint(path, {"w": torch.zeros(2, 2)}, config)
    assert load_checkpoint(path).config == config
