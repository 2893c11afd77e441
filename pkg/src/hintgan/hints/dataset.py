"""Dataset assembly: render every aligned assertion, shuffle, write JSONL
plus a manifest."""

import json
import random

from ..errors import ValidationError
from .rendering import TrainingExample, render_example
from .sampling import sample_hint

DEFAULT_FORMATS = {
    "conceptnet": "joint",
    "atomic2020": "paracomet",
    "glucose": "glucose",
}


def _glucose_counterparts(aligned):
    """Pair glucose :s/:g assertions that share a base row id."""
    by_base = {}
    for al in aligned:
        a = al.assertion
        if a.source == "glucose" and ":" in a.id:
            base, suffix = a.id.rsplit(":", 1)
            if suffix in ("s", "g"):
                by_base.setdefault(base, {})[suffix] = a
    return by_base


def render_all(aligned, stories, formats=None, p_hint=0.5, seed=0):
    formats = {**DEFAULT_FORMATS, **(formats or {})}
    story_by_id = {s.story_id: s for s in stories}
    pairs = _glucose_counterparts(aligned)
    rng = random.Random(seed)
    examples = []
    for al in aligned:
        a = al.assertion
        story = story_by_id.get(al.story_id)
        if story is None:
            raise ValidationError(f"aligned story {al.story_id!r} not in corpus")
        fmt = formats[a.source]
        counterpart = None
        if fmt == "glucose" and ":" in a.id:
            base, suffix = a.id.rsplit(":", 1)
            other = {"s": "g", "g": "s"}.get(suffix)
            counterpart = pairs.get(base, {}).get(other)
        hint = sample_hint(a, rng, p_hint=p_hint)
        examples.append(render_example(al, hint, fmt, story, counterpart))
    return examples


def build_dataset(aligned, stories, out_path, formats=None, p_hint=0.5, seed=0):
    """Render, shuffle with a seeded rng, write JSONL and a manifest.

    Returns (examples, manifest).
    """
    if not aligned:
        raise ValidationError("no aligned assertions to render")
    examples = render_all(aligned, stories, formats, p_hint, seed)
    random.Random(seed).shuffle(examples)
    with open(out_path, "w", encoding="utf-8") as fh:
        for ex in examples:
            fh.write(json.dumps(ex.to_dict(), ensure_ascii=False) + "\n")
    counts = {}
    for ex in examples:
        counts[ex.source] = counts.get(ex.source, 0) + 1
    manifest = {
        "total": len(examples),
        "counts": counts,
        "hinted_fraction": sum(ex.hinted for ex in examples) / len(examples),
        "p_hint": p_hint,
        "seed": seed,
        "formats": {**DEFAULT_FORMATS, **(formats or {})},
    }
    with open(str(out_path) + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2)
    return examples, manifest


def read_dataset(path):
    with open(path, encoding="utf-8") as fh:
        return [
            TrainingExample.from_dict(json.loads(line)) for line in fh if line.strip()
        ]
