"""EMB1 binary embedding file format.

Layout: magic "EMB1", u32 LE count, u32 LE dim, then count*dim float32 LE
values row-major. Ids live in a JSONL sidecar of {"row": int, "id": str}.
"""

import json
import struct

import numpy as np

from ..errors import ValidationError
from .embedder import EmbeddingMatrix

MAGIC = b"EMB1"


def write_emb1(matrix: EmbeddingMatrix, path, ids_path=None):
    ids_path = ids_path or str(path) + ".ids.jsonl"
    rows = np.ascontiguousarray(matrix.rows, dtype="<f4")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<II", rows.shape[0], rows.shape[1]))
        fh.write(rows.tobytes())
    with open(ids_path, "w", encoding="utf-8") as fh:
        for row, id_ in enumerate(matrix.ids):
            fh.write(json.dumps({"row": row, "id": id_}) + "\n")


def read_emb1(path, ids_path=None):
    ids_path = ids_path or str(path) + ".ids.jsonl"
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != MAGIC:
        raise ValidationError(f"{path}: bad magic {data[:4]!r}")
    count, dim = struct.unpack_from("<II", data, 4)
    payload = data[12:]
    expected = count * dim * 4
    if len(payload) != expected:
        raise ValidationError(
            f"{path}: payload is {len(payload)} bytes, header implies {expected}"
        )
    rows = np.frombuffer(payload, dtype="<f4").reshape(count, dim)
    ids = [None] * count
    with open(ids_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                rec = json.loads(line)
                ids[rec["row"]] = rec["id"]
    if any(i is None for i in ids):
        raise ValidationError(f"{ids_path}: missing rows in id sidecar")
    return EmbeddingMatrix(ids=ids, rows=rows.copy())
