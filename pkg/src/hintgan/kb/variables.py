"""Variable renaming between the two template naming schemes."""

import re

# Canonical letter mapping, not first-appearance order: X->A, Y->B, Z->C.
_PERSON_MAP = {"PersonX": "Person_A", "PersonY": "Person_B", "PersonZ": "Person_C"}
_PERSON_RE = re.compile(r"Person[XYZ]\b")


def rename_text(text):
    return _PERSON_RE.sub(lambda m: _PERSON_MAP[m.group(0)], text)


def rename_variables(a):
    """Map ATOMIC-style variables (PersonX/Y/Z) to the underscore scheme.

    Idempotent; parenthetical descriptions and all other text are preserved
    verbatim.
    """
    return a.with_fields(
        subject=rename_text(a.subject), object=rename_text(a.object)
    )
