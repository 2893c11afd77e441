"""Story corpus records and JSON-lines IO."""

import json
from dataclasses import dataclass

from ..errors import ValidationError


@dataclass(frozen=True)
class Story:
    story_id: str
    sentences: tuple

    def __post_init__(self):
        if not self.sentences or any(not s for s in self.sentences):
            raise ValidationError(f"story {self.story_id!r} has empty sentences")

    @property
    def text(self):
        return " ".join(self.sentences)

    def to_dict(self):
        return {"story_id": self.story_id, "sentences": list(self.sentences)}

    @classmethod
    def from_dict(cls, d):
        return cls(story_id=d["story_id"], sentences=tuple(d["sentences"]))


def read_stories_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [Story.from_dict(json.loads(line)) for line in fh if line.strip()]


def write_stories_jsonl(stories, path):
    with open(path, "w", encoding="utf-8") as fh:
        for s in stories:
            fh.write(json.dumps(s.to_dict(), ensure_ascii=False) + "\n")
