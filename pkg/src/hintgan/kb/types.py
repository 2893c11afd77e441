"""Canonical assertion record and the relation lexicon."""

import json
import re
from dataclasses import dataclass, asdict, replace
from importlib import resources

from ..errors import UnknownRelationError, ValidationError

SOURCES = ("conceptnet", "atomic2020", "glucose")
SPECIFICITIES = ("specific", "general")

# Variable tokens from either naming scheme, plus ATOMIC-style blanks.
VARIABLE_RE = re.compile(
    r"Person[XYZ]\b"
    r"|(?:Person|People|Someone|Some[ _]?[Pp]eople|Something|Somewhere)_[A-Z]\b"
    r"|____"
)


def contains_variables(text):
    return VARIABLE_RE.search(text) is not None


@dataclass(frozen=True)
class Assertion:
    """One (subject, relation, object, specificity) fact with its source tag."""

    id: str
    source: str
    subject: str
    relation: str
    relation_text: str
    object: str
    specificity: str
    glucose_dimension: int | None = None

    def __post_init__(self):
        if self.source not in SOURCES:
            raise ValidationError(f"unknown source {self.source!r}")
        if self.specificity not in SPECIFICITIES:
            raise ValidationError(f"unknown specificity {self.specificity!r}")
        for field in ("subject", "relation", "object"):
            if not getattr(self, field).strip():
                raise ValidationError(f"{field} is empty in assertion {self.id!r}")
        if self.specificity == "general" and not (
            contains_variables(self.subject) or contains_variables(self.object)
        ):
            raise ValidationError(
                f"general assertion {self.id!r} has no variable tokens"
            )
        if (self.glucose_dimension is not None) != (self.source == "glucose"):
            raise ValidationError(
                f"glucose_dimension must be present iff source=glucose ({self.id!r})"
            )
        if self.glucose_dimension is not None and not 1 <= self.glucose_dimension <= 10:
            raise ValidationError(
                f"glucose_dimension out of range: {self.glucose_dimension}"
            )

    def text(self):
        """Plain textual expression used for embedding and rendering."""
        return f"{self.subject} {self.relation_text} {self.object}"

    def with_fields(self, **kw):
        return replace(self, **kw)

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        return cls(**d)


class RelationLexicon:
    """Total map from symbolic relation to its textual phrase.

    Unknown symbols raise, never fall through to identity.
    """

    def __init__(self, entries):
        self.entries = dict(entries)

    @classmethod
    def default(cls):
        data = json.loads(
            resources.files("hintgan.kb").joinpath("relations.json").read_text()
        )
        return cls(data["entries"])

    def lookup(self, symbol):
        try:
            return self.entries[symbol]
        except KeyError:
            raise UnknownRelationError(f"no textual entry for relation {symbol!r}")

    def __contains__(self, symbol):
        return symbol in self.entries


def write_assertions_jsonl(assertions, path):
    with open(path, "w", encoding="utf-8") as fh:
        for a in assertions:
            fh.write(json.dumps(a.to_dict(), ensure_ascii=False) + "\n")


def read_assertions_jsonl(path):
    with open(path, encoding="utf-8") as fh:
        return [Assertion.from_dict(json.loads(line)) for line in fh if line.strip()]
