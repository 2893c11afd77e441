from .config import GanConfig
from .batching import (
    BatchRecord,
    disc_input_ids,
    pad_batch,
    record_from_example,
    replace_object,
    replace_subject,
    strip_hint,
)
from .confounder import confounder_shuffle
from .loop import (
    build_models,
    discriminator_step,
    generator_step,
    make_fake_decodes,
    iter_batches,
    render_scoring_input,
    score_assertion,
    teacher_forced_ce,
    train,
)

__all__ = [
    "GanConfig",
    "BatchRecord",
    "record_from_example",
    "replace_object",
    "replace_subject",
    "strip_hint",
    "disc_input_ids",
    "pad_batch",
    "confounder_shuffle",
    "build_models",
    "teacher_forced_ce",
    "make_fake_decodes",
    "discriminator_step",
    "generator_step",
    "iter_batches",
    "train",
    "render_scoring_input",
    "score_assertion",
]
