"""Deterministic hashed text embedder and the embedding matrix container.

The embedder is a dependency-free stand-in for a sentence encoder: signed
feature hashing of unigram+bigram counts with sublinear weighting, then L2
normalization. Externally produced vectors can be ingested instead via the
EMB1 binary format (emb_io).
"""

import hashlib
import re
from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from ..errors import EmptyTextError, ValidationError

_TOKEN_RE = re.compile(r"[a-z0-9]+(?:'[a-z0-9]+)*")

UNIT_NORM_TOL = 1e-4


@dataclass
class EmbeddingMatrix:
    """Row-major unit-norm float32 vectors with an id sidecar."""

    ids: list
    rows: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float32)
        if self.rows.ndim != 2 or len(self.ids) != self.rows.shape[0]:
            raise ValidationError("ids/rows length mismatch")
        if len(set(self.ids)) != len(self.ids):
            raise ValidationError("duplicate ids in embedding matrix")
        norms = np.linalg.norm(self.rows, axis=1)
        if self.rows.size and np.any(np.abs(norms - 1.0) > UNIT_NORM_TOL):
            raise ValidationError("embedding rows are not unit norm")

    @property
    def dim(self):
        return self.rows.shape[1]

    def __len__(self):
        return len(self.ids)

    def row_for(self, id_):
        return self.rows[self.ids.index(id_)]


class HashingTextEmbedder(BaseEstimator, TransformerMixin):
    """Feature-hashed text vectorizer, deterministic given (dim, seed).

    Stateless: fit is a no-op kept for pipeline compatibility.
    """

    def __init__(self, dim=256, seed=0):
        self.dim = dim
        self.seed = seed

    def fit(self, X, y=None):
        if self.dim < 8:
            raise ValidationError("dim must be >= 8")
        return self

    def _bucket(self, feature):
        h = hashlib.blake2b(
            feature.encode("utf-8"),
            digest_size=8,
            key=str(self.seed).encode("utf-8"),
        ).digest()
        value = int.from_bytes(h, "little")
        sign = 1.0 if value & 1 else -1.0
        return (value >> 1) % self.dim, sign

    def _embed_one(self, text):
        tokens = _TOKEN_RE.findall(text.lower())
        counts = {}
        for tok in tokens:
            counts[tok] = counts.get(tok, 0) + 1
        for a, b in zip(tokens, tokens[1:]):
            bigram = f"{a} {b}"
            counts[bigram] = counts.get(bigram, 0) + 1
        vec = np.zeros(self.dim, dtype=np.float64)
        for feature, count in counts.items():
            bucket, sign = self._bucket(feature)
            vec[bucket] += sign * np.log1p(count)
        return vec

    def transform(self, X, allow_empty=False):
        self.fit(X)
        rows = np.zeros((len(X), self.dim), dtype=np.float32)
        for i, text in enumerate(X):
            vec = self._embed_one(text)
            norm = np.linalg.norm(vec)
            if norm == 0.0:
                if not allow_empty:
                    raise EmptyTextError(
                        f"text at index {i} embeds to the zero vector"
                    )
                continue
            rows[i] = (vec / norm).astype(np.float32)
        # Renormalize in float32 so stored rows are unit within tolerance.
        norms = np.linalg.norm(rows, axis=1)
        nonzero = norms > 0
        rows[nonzero] /= norms[nonzero, None]
        return rows

    def embed(self, ids, texts):
        return EmbeddingMatrix(ids=list(ids), rows=self.transform(texts))
