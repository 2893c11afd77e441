"""CKP1 versioned binary checkpoint format.

Layout: magic "CKP1", u32 LE header length, JSON header
{"version", "step", "vocab_hash", "tensors": [{"name", "shape"}]},
then raw little-endian float32 tensor data in header order.
"""

import json
import struct

import numpy as np
import torch

from ..errors import ValidationError

MAGIC = b"CKP1"
VERSION = 1


def save_checkpoint(path, tensors, step=0, vocab_hash="", extra=None):
    """tensors: ordered mapping name -> tensor/ndarray (stored as f32)."""
    header = {
        "version": VERSION,
        "step": step,
        "vocab_hash": vocab_hash,
        "tensors": [
            {"name": name, "shape": list(np.asarray(t.detach().cpu() if
             isinstance(t, torch.Tensor) else t).shape)}
            for name, t in tensors.items()
        ],
    }
    if extra:
        header["extra"] = extra
    blob = json.dumps(header).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", len(blob)))
        fh.write(blob)
        for t in tensors.values():
            arr = (
                t.detach().cpu().numpy() if isinstance(t, torch.Tensor)
                else np.asarray(t)
            )
            fh.write(np.ascontiguousarray(arr, dtype="<f4").tobytes())


def load_checkpoint(path):
    """Returns (header dict, mapping name -> float32 ndarray)."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValidationError(f"{path}: bad magic {data[:4]!r}")
    (hlen,) = struct.unpack_from("<I", data, 4)
    header = json.loads(data[8 : 8 + hlen].decode("utf-8"))
    if header.get("version") != VERSION:
        raise ValidationError(f"{path}: unsupported version {header.get('version')}")
    offset = 8 + hlen
    tensors = {}
    for spec in header["tensors"]:
        shape = tuple(spec["shape"])
        n = int(np.prod(shape)) if shape else 1
        arr = np.frombuffer(data, dtype="<f4", count=n, offset=offset)
        tensors[spec["name"]] = arr.reshape(shape).copy()
        offset += n * 4
    if offset != len(data):
        raise ValidationError(f"{path}: trailing bytes after tensor payload")
    return header, tensors


def save_module(path, module, step=0, vocab_hash="", extra=None):
    save_checkpoint(path, dict(module.state_dict()), step, vocab_hash, extra)


def load_module(path, module, vocab_hash=None):
    header, tensors = load_checkpoint(path)
    if vocab_hash is not None and header["vocab_hash"] != vocab_hash:
        raise ValidationError(
            f"{path}: vocab hash {header['vocab_hash']} != expected {vocab_hash}"
        )
    state = {
        k: torch.from_numpy(v).to(dtype=p.dtype)
        for (k, v), p in zip(tensors.items(), [module.state_dict()[k] for k in tensors])
    }
    module.load_state_dict(state)
    return header
