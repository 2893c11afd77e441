from .sampling import Hint, assertion_parts, sample_hint
from .rendering import (
    TrainingExample,
    parse_joint_target,
    render_example,
    render_joint_target,
)
from .dataset import build_dataset, read_dataset, render_all

__all__ = [
    "Hint",
    "assertion_parts",
    "sample_hint",
    "TrainingExample",
    "render_example",
    "render_joint_target",
    "parse_joint_target",
    "build_dataset",
    "read_dataset",
    "render_all",
]
