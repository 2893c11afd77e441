"""Adapters that turn the three knowledge-base dump schemas into canonical
assertions.

Schemas:
  conceptnet  tab-separated: relation, subject, object (extra columns ignored)
  atomic2020  tab-separated: head, relation, tail
  glucose     comma-separated with header: dimension, story_id, specific, general
              where specific/general are "subject>Relation>object" strings

Malformed rows are counted and skipped; a stream that is mostly malformed
aborts with a schema-mismatch error.
"""

import csv
import io
import re
from dataclasses import dataclass, field

from ..errors import SchemaMismatchError, ValidationError
from .types import Assertion, RelationLexicon, contains_variables

MALFORMED_ABORT_FRACTION = 0.5

_GLUCOSE_TRIPLE_RE = re.compile(r"^\s*(.+?)\s*>\s*([^>]+?)\s*>\s*(.+?)\s*$")


@dataclass
class ParseStats:
    parsed: int = 0
    skipped: int = 0
    errors: list = field(default_factory=list)


def parse_source(path, source, lexicon=None, stats=None):
    """Parse a dump file into Assertions. Returns a list.

    ``stats`` (a ParseStats) collects the skip count; ids are deterministic
    given (source, row index).
    """
    lexicon = lexicon or RelationLexicon.default()
    stats = stats if stats is not None else ParseStats()
    with open(path, encoding="utf-8") as fh:
        raw = fh.read()

    parsers = {
        "conceptnet": _parse_conceptnet,
        "atomic2020": _parse_atomic,
        "glucose": _parse_glucose,
    }
    if source not in parsers:
        raise ValidationError(f"unknown source {source!r}")
    out = list(parsers[source](raw, lexicon, stats))
    total = stats.parsed + stats.skipped
    if total and stats.skipped / total > MALFORMED_ABORT_FRACTION:
        raise SchemaMismatchError(
            f"{stats.skipped}/{total} rows malformed in {path}; "
            f"wrong schema for source {source!r}?"
        )
    return out


def _rows(raw):
    for i, line in enumerate(raw.splitlines()):
        if line.strip():
            yield i, line


def _parse_conceptnet(raw, lexicon, stats):
    for i, line in _rows(raw):
        cols = line.split("\t")
        if len(cols) < 3 or not all(c.strip() for c in cols[:3]):
            stats.skipped += 1
            stats.errors.append((i, "expected rel<TAB>subject<TAB>object"))
            continue
        rel, subj, obj = (c.strip() for c in cols[:3])
        try:
            yield Assertion(
                id=f"conceptnet:{i}",
                source="conceptnet",
                subject=subj,
                relation=rel,
                relation_text=lexicon.lookup(rel),
                object=obj,
                specificity="specific",
            )
            stats.parsed += 1
        except ValidationError as e:
            stats.skipped += 1
            stats.errors.append((i, str(e)))


def _parse_atomic(raw, lexicon, stats):
    for i, line in _rows(raw):
        cols = line.split("\t")
        if len(cols) < 3 or not all(c.strip() for c in cols[:3]):
            stats.skipped += 1
            stats.errors.append((i, "expected head<TAB>relation<TAB>tail"))
            continue
        head, rel, tail = (c.strip() for c in cols[:3])
        if tail.lower() == "none":
            stats.skipped += 1
            stats.errors.append((i, "none tail"))
            continue
        spec = (
            "general"
            if contains_variables(head) or contains_variables(tail)
            else "specific"
        )
        try:
            yield Assertion(
                id=f"atomic2020:{i}",
                source="atomic2020",
                subject=head,
                relation=rel,
                relation_text=lexicon.lookup(rel),
                object=tail,
                specificity=spec,
            )
            stats.parsed += 1
        except ValidationError as e:
            stats.skipped += 1
            stats.errors.append((i, str(e)))


def _parse_glucose(raw, lexicon, stats):
    reader = csv.DictReader(io.StringIO(raw))
    required = {"dimension", "story_id", "specific", "general"}
    if reader.fieldnames is None or not required <= set(reader.fieldnames):
        raise SchemaMismatchError(
            f"glucose csv must have columns {sorted(required)}, "
            f"got {reader.fieldnames}"
        )
    for i, row in enumerate(reader):
        try:
            dim = int(row["dimension"])
            emitted = []
            for spec_name, col in (("specific", "specific"), ("general", "general")):
                m = _GLUCOSE_TRIPLE_RE.match(row[col] or "")
                if not m:
                    raise ValidationError(f"bad triple in column {col!r}")
                subj, rel, obj = m.groups()
                emitted.append(
                    Assertion(
                        id=f"glucose:{i}:{spec_name[0]}",
                        source="glucose",
                        subject=subj,
                        relation=rel,
                        relation_text=lexicon.lookup(rel),
                        object=obj,
                        specificity=spec_name,
                        glucose_dimension=dim,
                    )
                )
            yield from emitted
            stats.parsed += 1
        except (ValidationError, ValueError) as e:
            stats.skipped += 1
            stats.errors.append((i, str(e)))
