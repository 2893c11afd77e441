"""Two-stage alignment: nearest story for each assertion, then nearest
sentence within that story."""

import json
from dataclasses import dataclass

from ..errors import ValidationError
from .index import build_index


@dataclass(frozen=True)
class AlignedAssertion:
    """An assertion bound to its nearest story and sentence (1-based)."""

    assertion: object
    story_id: str
    sentence_index: int
    story_distance: float
    sentence_distance: float

    def to_dict(self):
        return {
            "assertion": self.assertion.to_dict(),
            "story_id": self.story_id,
            "sentence_index": self.sentence_index,
            "story_distance": self.story_distance,
            "sentence_distance": self.sentence_distance,
        }

    @classmethod
    def from_dict(cls, d, assertion_cls):
        return cls(
            assertion=assertion_cls.from_dict(d["assertion"]),
            story_id=d["story_id"],
            sentence_index=d["sentence_index"],
            story_distance=d["story_distance"],
            sentence_distance=d["sentence_distance"],
        )


def align_corpus(assertions, stories, a_emb, s_emb, embedder, index_mode="exact",
                 **index_kw):
    """Align every assertion to its nearest story and sentence.

    a_emb/s_emb must come from the same embedder configuration as
    ``embedder``, which is reused to vectorize story sentences (cached per
    story).
    """
    a_pos = {id_: i for i, id_ in enumerate(a_emb.ids)}
    missing = [a.id for a in assertions if a.id not in a_pos]
    if missing:
        raise ValidationError(f"assertion embeddings missing for {missing[:5]}")
    story_by_id = {s.story_id: s for s in stories}
    missing = [sid for sid in story_by_id if sid not in set(s_emb.ids)]
    if missing:
        raise ValidationError(f"story embeddings missing for {missing[:5]}")

    story_index = build_index(s_emb, index_mode, **index_kw)
    sentence_indexes = {}

    def sentences_index(story):
        cached = sentence_indexes.get(story.story_id)
        if cached is None:
            ids = [f"{story.story_id}#{k}" for k in range(1, len(story.sentences) + 1)]
            matrix = embedder.embed(ids, list(story.sentences))
            cached = build_index(matrix, "exact")
            sentence_indexes[story.story_id] = cached
        return cached

    out = []
    for a in assertions:
        query = a_emb.rows[a_pos[a.id]]
        story_id, story_dist = story_index.nearest(query)
        story = story_by_id[story_id]
        sent_id, sent_dist = sentences_index(story).nearest(query)
        sentence_index = int(sent_id.rsplit("#", 1)[1])
        out.append(
            AlignedAssertion(
                assertion=a,
                story_id=story_id,
                sentence_index=sentence_index,
                story_distance=story_dist,
                sentence_distance=sent_dist,
            )
        )
    return out


def write_aligned_jsonl(aligned, path):
    with open(path, "w", encoding="utf-8") as fh:
        for al in aligned:
            fh.write(json.dumps(al.to_dict(), ensure_ascii=False) + "\n")


def read_aligned_jsonl(path, assertion_cls=None):
    from ..kb.types import Assertion

    assertion_cls = assertion_cls or Assertion
    with open(path, encoding="utf-8") as fh:
        return [
            AlignedAssertion.from_dict(json.loads(line), assertion_cls)
            for line in fh
            if line.strip()
        ]
