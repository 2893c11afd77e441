"""Exception hierarchy shared across the package."""


class HintganError(Exception):
    """Base class for all package errors."""


class ValidationError(HintganError):
    """Bad input data or configuration (CLI exit code 1)."""


class SchemaMismatchError(ValidationError):
    """A knowledge-base dump does not match the adapter's expected schema."""


class UnknownRelationError(ValidationError):
    """A relation symbol has no textual entry in the lexicon."""


class MaskFillError(ValidationError):
    """A mask filler could not fill a slot; carries the unfilled slot."""

    def __init__(self, slot, message=None):
        self.slot = slot
        super().__init__(message or f"could not fill slot {slot!r}")


class EmptyTextError(ValidationError):
    """A text to embed was empty, which would produce an unnormalizable row."""
