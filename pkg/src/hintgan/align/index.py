"""Top-1 cosine-distance indexes: exact brute force and a partitioned
(inverted-file) variant with seeded mean-reassignment clustering."""

import numpy as np
from sklearn.base import BaseEstimator

from ..errors import ValidationError
from .embedder import UNIT_NORM_TOL, EmbeddingMatrix

KMEANS_ITERS = 10


def _check_query(query, dim):
    query = np.asarray(query, dtype=np.float64)
    if query.shape != (dim,):
        raise ValidationError(f"query dim {query.shape} != index dim ({dim},)")
    if abs(np.linalg.norm(query) - 1.0) > UNIT_NORM_TOL:
        raise ValidationError("query is not unit norm")
    return query


def _best_of(ids, sims):
    # Ties on equal similarity break to the lexicographically smallest id.
    best = sims.max()
    tied = [ids[i] for i in np.flatnonzero(sims == best)]
    winner = min(tied)
    return winner, float(1.0 - best)


class ExactCosineIndex(BaseEstimator):
    """Brute-force scan; distance is 1 - cosine on unit vectors."""

    def fit(self, matrix: EmbeddingMatrix):
        if len(matrix) == 0:
            raise ValidationError("cannot index an empty matrix")
        self.matrix_ = matrix
        return self

    @property
    def dim(self):
        return self.matrix_.dim

    def nearest(self, query):
        query = _check_query(query, self.dim)
        sims = self.matrix_.rows.astype(np.float64) @ query
        return _best_of(self.matrix_.ids, sims)


class PartitionedCosineIndex(BaseEstimator):
    """Rows bucketed under k centroids; queries probe the n_probe nearest
    buckets. k=1, n_probe=1 degenerates to the exact index."""

    def __init__(self, k_clusters=8, n_probe=3, seed=0, n_assign=2):
        self.k_clusters = k_clusters
        self.n_probe = n_probe
        self.seed = seed
        self.n_assign = n_assign

    def fit(self, matrix: EmbeddingMatrix):
        if len(matrix) == 0:
            raise ValidationError("cannot index an empty matrix")
        if self.k_clusters > len(matrix):
            raise ValidationError(
                f"k_clusters={self.k_clusters} exceeds row count {len(matrix)}"
            )
        self.matrix_ = matrix
        rows = matrix.rows.astype(np.float64)
        rng = np.random.default_rng(self.seed)
        centroids = rows[rng.choice(len(rows), self.k_clusters, replace=False)]
        for _ in range(KMEANS_ITERS):
            assign = np.argmax(rows @ centroids.T, axis=1)
            for c in range(self.k_clusters):
                members = rows[assign == c]
                if len(members):
                    mean = members.mean(axis=0)
                    norm = np.linalg.norm(mean)
                    if norm > 0:
                        centroids[c] = mean / norm
        self.centroids_ = centroids
        sims = rows @ centroids.T
        self.assign_ = np.argmax(sims, axis=1)
        # spill each row into its n_assign nearest buckets; rows near a
        # boundary stay reachable from either side, which is what keeps
        # recall high when only a few buckets are probed
        n_assign = min(self.n_assign, self.k_clusters)
        top = np.argsort(-sims, axis=1)[:, :n_assign]
        self.buckets_ = [
            np.flatnonzero((top == c).any(axis=1))
            for c in range(self.k_clusters)
        ]
        return self

    @property
    def dim(self):
        return self.matrix_.dim

    def nearest(self, query):
        query = _check_query(query, self.dim)
        n_probe = min(self.n_probe, self.k_clusters)
        centroid_sims = self.centroids_ @ query
        probe = np.argsort(-centroid_sims)[:n_probe]
        cand = np.concatenate([self.buckets_[c] for c in probe])
        if len(cand) == 0:
            cand = np.arange(len(self.matrix_))
        sims = self.matrix_.rows[cand].astype(np.float64) @ query
        ids = [self.matrix_.ids[i] for i in cand]
        return _best_of(ids, sims)


def build_index(matrix, mode="exact", k_clusters=8, n_probe=3, seed=0):
    if mode == "exact":
        return ExactCosineIndex().fit(matrix)
    if mode == "partitioned":
        return PartitionedCosineIndex(k_clusters, n_probe, seed).fit(matrix)
    raise ValidationError(f"unknown index mode {mode!r}")
