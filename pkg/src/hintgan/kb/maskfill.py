"""Turning general template assertions into specific ones by filling their
variable slots from an aligned context sentence.

The default filler is rule based and deterministic. Model-produced fills can
be ingested from a JSONL sidecar instead (ExternalFiller).
"""

import json
import re

from ..errors import MaskFillError, ValidationError
from .types import Assertion

_SLOT_RE = re.compile(r"Person[XYZ]\b|Person_[ABC]\b|____")
_WORD_RE = re.compile(r"[A-Za-z][A-Za-z'_-]*")

# Common function words that are never acceptable blank fills.
_STOPWORDS = frozenset(
    "a an the of to in on at for with and or but is are was were be been "
    "his her its their my your our he she it they them him this that "
    "every day out goes go went not do does did".split()
)

_PERSON_ORDER = {
    "PersonX": 0,
    "PersonY": 1,
    "PersonZ": 2,
    "Person_A": 0,
    "Person_B": 1,
    "Person_C": 2,
}


class RuleBasedFiller:
    """Deterministic filler driven by the context sentence.

    Person slots take capitalized tokens from the context, preferring
    non-sentence-initial ones (a capitalized sentence opener is the fallback
    candidate). Blanks take the first content word; in non-strict mode
    missing candidates fall back to "someone"/"something".
    """

    def __init__(self, strict=False):
        self.strict = strict

    def _person_candidates(self, context):
        words = _WORD_RE.findall(context)
        cands = []
        for i, w in enumerate(words):
            if i > 0 and w[0].isupper() and w not in cands:
                cands.append(w)
        if words and words[0][0].isupper() and words[0] not in cands:
            cands.append(words[0])
        return cands

    def _blank_candidate(self, context):
        for w in _WORD_RE.findall(context):
            if w[0].islower() and w.lower() not in _STOPWORDS and len(w) >= 3:
                return w
        return None

    def fill(self, slot, context):
        if slot == "____":
            cand = self._blank_candidate(context)
            if cand is None:
                if self.strict:
                    raise MaskFillError(slot)
                return "something"
            return cand
        cands = self._person_candidates(context)
        idx = _PERSON_ORDER[slot]
        if idx >= len(cands):
            if self.strict:
                raise MaskFillError(slot)
            return "someone"
        return cands[idx]


class ExternalFiller:
    """Fills ingested from JSONL lines {"id": ..., "fills": {slot: text}}.

    Lets a masked language model run offline and feed its outputs back in.
    """

    def __init__(self, path):
        self.by_id = {}
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                if line.strip():
                    rec = json.loads(line)
                    self.by_id[rec["id"]] = rec["fills"]

    def for_assertion(self, assertion_id):
        fills = self.by_id.get(assertion_id, {})

        def fill(slot, context):
            if slot not in fills:
                raise MaskFillError(slot, f"no external fill for {slot!r}")
            return fills[slot]

        return fill


def fill_specificity(a, context_sentence, filler):
    """Return a new specific assertion with every variable and blank filled.

    The caller keeps the original general assertion; both specificities
    coexist downstream.
    """
    if a.source != "atomic2020":
        raise ValidationError("specificity filling only applies to atomic2020")
    if a.specificity != "general":
        raise ValidationError("assertion is already specific")

    fill = filler.fill if hasattr(filler, "fill") else filler

    def substitute(text):
        return _SLOT_RE.sub(lambda m: fill(m.group(0), context_sentence), text)

    filled = a.with_fields(
        id=a.id + ":filled",
        subject=substitute(a.subject),
        object=substitute(a.object),
        specificity="specific",
    )
    leftover = _SLOT_RE.search(filled.subject) or _SLOT_RE.search(filled.object)
    if leftover:
        raise MaskFillError(leftover.group(0), "filler reintroduced a slot")
    return filled
