from .stories import Story, read_stories_jsonl, write_stories_jsonl
from .embedder import EmbeddingMatrix, HashingTextEmbedder
from .index import ExactCosineIndex, PartitionedCosineIndex, build_index
from .emb_io import read_emb1, write_emb1
from .aligner import (
    AlignedAssertion,
    align_corpus,
    read_aligned_jsonl,
    write_aligned_jsonl,
)

__all__ = [
    "Story",
    "read_stories_jsonl",
    "write_stories_jsonl",
    "EmbeddingMatrix",
    "HashingTextEmbedder",
    "ExactCosineIndex",
    "PartitionedCosineIndex",
    "build_index",
    "read_emb1",
    "write_emb1",
    "AlignedAssertion",
    "align_corpus",
    "read_aligned_jsonl",
    "write_aligned_jsonl",
]
