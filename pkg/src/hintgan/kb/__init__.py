from .types import (
    Assertion,
    RelationLexicon,
    read_assertions_jsonl,
    write_assertions_jsonl,
)
from .parsers import ParseStats, parse_source
from .variables import rename_variables
from .maskfill import ExternalFiller, RuleBasedFiller, fill_specificity

__all__ = [
    "Assertion",
    "RelationLexicon",
    "ParseStats",
    "parse_source",
    "rename_variables",
    "RuleBasedFiller",
    "ExternalFiller",
    "fill_specificity",
    "read_assertions_jsonl",
    "write_assertions_jsonl",
]
