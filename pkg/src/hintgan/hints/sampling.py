"""Hint construction: a rendered subset (never all) of an assertion's parts."""

from dataclasses import dataclass

from ..errors import ValidationError

PART_ORDER = ("specificity", "subject", "relation", "object")

PART_SYMBOLS = {
    "subject": "<|subj|>",
    "relation": "<|rel|>",
    "object": "<|obj|>",
}

SPECIFICITY_SYMBOLS = {"specific": "<|specific|>", "general": "<|general|>"}


@dataclass(frozen=True)
class Hint:
    """Ordered (part_kind, text) pairs, canonical order, strict subset."""

    parts: tuple

    def __post_init__(self):
        kinds = [k for k, _ in self.parts]
        if not 1 <= len(kinds) < len(PART_ORDER):
            raise ValidationError("hint must contain between 1 and P-1 parts")
        if len(set(kinds)) != len(kinds):
            raise ValidationError("duplicate part kinds in hint")
        if list(kinds) != sorted(kinds, key=PART_ORDER.index):
            raise ValidationError("hint parts are out of canonical order")

    def render(self):
        """Inner hint text, without the surrounding parenthesis.

        The specificity symbol concatenates directly onto the next part;
        other parts join with ", ".
        """
        pieces = []
        for kind, text in self.parts:
            if kind == "specificity":
                pieces.append(SPECIFICITY_SYMBOLS[text])
            else:
                rendered = f"{PART_SYMBOLS[kind]} {text}"
                if pieces and pieces[-1] in SPECIFICITY_SYMBOLS.values():
                    pieces[-1] += rendered
                else:
                    pieces.append(rendered)
        return ", ".join(pieces)


def assertion_parts(a):
    return (
        ("specificity", a.specificity),
        ("subject", a.subject),
        ("relation", a.relation_text),
        ("object", a.object),
    )


def sample_hint(a, rng, p_hint=0.5):
    """With probability 1-p_hint return None; otherwise draw k uniform in
    {1..P-1} parts without replacement, rendered in canonical order."""
    if rng.random() >= p_hint:
        return None
    parts = assertion_parts(a)
    k = rng.randint(1, len(parts) - 1)
    chosen = sorted(rng.sample(range(len(parts)), k))
    return Hint(parts=tuple(parts[i] for i in chosen))
