"""Rendering aligned assertions into model source/target strings.

Three serialization formats:
  paracomet  source: story + " <|sentK|> <|REL|>" [+ hint]; target: object
  glucose    source: "D: " + story with the target sentence wrapped in
             asterisks [+ hint]; target: "specific ** general" triples with
             ">relation text>" separators
  joint      source: story + " <|target|> " + sentence [+ hint]; target:
             symbol-token tuple sequence that round-trips exactly

Hints are appended as " hint: (<inner>)" in every format.
"""

import re
from dataclasses import dataclass

from ..errors import ValidationError
from .sampling import assertion_parts

FORMATS = ("paracomet", "glucose", "joint")

JOINT_SYMBOLS = {
    "specific": "<specific>",
    "general": "<general>",
    "subject": "<subject>",
    "relation": "<relation>",
    "object": "<object>",
}

_JOINT_TARGET_RE = re.compile(
    r"^<(specific|general)> <subject> (.*?) <relation> (.*?) <object> (.*)$",
    re.S,
)


@dataclass(frozen=True)
class TrainingExample:
    source_text: str
    target_text: str
    format: str
    hinted: bool
    assertion_id: str
    story_id: str
    sentence_index: int
    source: str

    def to_dict(self):
        return {
            "source_text": self.source_text,
            "target_text": self.target_text,
            "format": self.format,
            "hinted": self.hinted,
            "assertion_id": self.assertion_id,
            "story_id": self.story_id,
            "sentence_index": self.sentence_index,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


def _check_hint(hint, assertion):
    expected = dict(assertion_parts(assertion))
    for kind, text in hint.parts:
        if expected.get(kind) != text:
            raise ValidationError(
                f"hint part {kind!r}={text!r} was not drawn from assertion "
                f"{assertion.id!r}"
            )


def _hint_suffix(hint):
    return f" hint: ({hint.render()})" if hint is not None else ""


def glucose_triple(a):
    return f"{a.subject} >{a.relation_text}> {a.object}"


def render_example(al, hint, fmt, story, counterpart=None):
    """Render one aligned assertion into a TrainingExample.

    ``counterpart`` supplies the paired opposite-specificity assertion for
    the glucose format's two-triple target.
    """
    a = al.assertion
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}")
    if not 1 <= al.sentence_index <= len(story.sentences):
        raise ValidationError("sentence_index out of range for story")
    if hint is not None:
        _check_hint(hint, a)

    if fmt == "paracomet":
        source = (
            f"{story.text} <|sent{al.sentence_index}|> <|{a.relation}|>"
            + _hint_suffix(hint)
        )
        target = a.object
    elif fmt == "glucose":
        if a.glucose_dimension is None:
            raise ValidationError("glucose format requires a glucose_dimension")
        marked = " ".join(
            f"*{s}*" if k == al.sentence_index else s
            for k, s in enumerate(story.sentences, start=1)
        )
        source = f"{a.glucose_dimension}: {marked}" + _hint_suffix(hint)
        specific = a if a.specificity == "specific" else counterpart
        general = a if a.specificity == "general" else counterpart
        if specific is None or general is None:
            raise ValidationError(
                "glucose format needs both a specific and a general assertion"
            )
        target = f"{glucose_triple(specific)} ** {glucose_triple(general)}"
    else:
        source = (
            f"{story.text} <|target|> {story.sentences[al.sentence_index - 1]}"
            + _hint_suffix(hint)
        )
        target = render_joint_target(a)

    return TrainingExample(
        source_text=source,
        target_text=target,
        format=fmt,
        hinted=hint is not None,
        assertion_id=a.id,
        story_id=al.story_id,
        sentence_index=al.sentence_index,
        source=a.source,
    )


def render_joint_target(a):
    return (
        f"{JOINT_SYMBOLS[a.specificity]} "
        f"<subject> {a.subject} "
        f"<relation> {a.relation_text} "
        f"<object> {a.object}"
    )


def parse_joint_target(text):
    """Recover (specificity, subject, relation_text, object) from a joint
    target string. Inverse of render_joint_target."""
    m = _JOINT_TARGET_RE.match(text)
    if not m:
        raise ValidationError(f"not a joint-format target: {text!r}")
    return m.group(1), m.group(2), m.group(3), m.group(4)
