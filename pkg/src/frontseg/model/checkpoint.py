"""Portable checkpoint format.

A checkpoint file is, in order:

* magic bytes ``FSCKPT01``
* uint32 little-endian byte length of the UTF-8 JSON config block
* the JSON config block
* uint32 little-endian tensor count
* per tensor: uint16 name length, UTF-8 name, uint8 rank, per-dimension
  uint32 sizes, then the row-major float32 little-endian payload.

Everything is stored as float32; integer buffers (e.g. batch-norm step
counters) are cast on save and restored to their original dtype on load.
The layout has no framework-specific pieces, so any language with a JSON
parser can read it.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

MAGIC = b"FSCKPT01"


@dataclass(frozen=True)
class Checkpoint:
    config: dict
    tensors: dict


def save_checkpoint(path, state_dict, config):
    """Write parameters plus a JSON config block to ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    config_bytes = json.dumps(config, sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(config_bytes)))
        fh.write(config_bytes)
        fh.write(struct.pack("<I", len(state_dict)))
        for name, tensor in state_dict.items():
            array = tensor.detach().cpu().numpy().astype("<f4", copy=False)
            if array.ndim:
                # ascontiguousarray promotes rank-0 arrays to rank 1
                array = np.ascontiguousarray(array)
            name_bytes = name.encode("utf-8")
            fh.write(struct.pack("<H", len(name_bytes)))
            fh.write(name_bytes)
            fh.write(struct.pack("<B", array.ndim))
            fh.write(struct.pack(f"<{array.ndim}I", *array.shape))
            fh.write(array.tobytes())


def load_checkpoint(path):
    """Read a checkpoint file into a config dict and named float32 arrays."""
    with open(path, "rb") as fh:
        magic = fh.read(len(MAGIC))
        if magic != MAGIC:
            raise ValueError(f"{path} is not a checkpoint file (bad magic {magic!r})")
        (config_len,) = struct.unpack("<I", fh.read(4))
        config = json.loads(fh.read(config_len).decode("utf-8"))
        (count,) = struct.unpack("<I", fh.read(4))
        tensors = {}
        for _ in range(count):
            (name_len,) = struct.unpack("<H", fh.read(2))
            name = fh.read(name_len).decode("utf-8")
            (rank,) = struct.unpack("<B", fh.read(1))
            shape = struct.unpack(f"<{rank}I", fh.read(4 * rank)) if rank else ()
            size = int(np.prod(shape, dtype=np.int64)) if shape else 1
            data = np.frombuffer(fh.read(4 * size), dtype="<f4").reshape(shape)
            tensors[name] = data.copy()
    return Checkpoint(config=config, tensors=tensors)


def load_into(module, checkpoint):
    """Load checkpoint tensors into a module, rejecting shape mismatches.

    The error message lists both sides' full shape signatures so a config /
    checkpoint mix-up is diagnosable from the message alone.
    """
    state = module.state_dict()
    expected = {name: tuple(t.shape) for name, t in state.items()}
    found = {name: tuple(a.shape) for name, a in checkpoint.tensors.items()}
    if expected != found:
        problems = []
        for name in sorted(set(expected) | set(found)):
            e, f = expected.get(name), found.get(name)
            if e != f:
                problems.append(f"  {name}: model={e} checkpoint={f}")
        raise ValueError(
            "checkpoint does not match the model configuration:\n"
            + "\n".join(problems)
            + f"\nmodel signature: {expected}\ncheckpoint signature: {found}"
        )
    converted = {
        name: torch.from_numpy(array).to(state[name].dtype)
        for name, array in checkpoint.tensors.items()
    }
    module.load_state_dict(converted)
    return module
