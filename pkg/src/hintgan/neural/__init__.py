from .vocab import Vocabulary, split_text, join_tokens
from .model import Discriminator, Generator
from .decode import SoftSequence, decode_beam, decode_greedy
from .checkpoint import (
    load_checkpoint,
    load_module,
    save_checkpoint,
    save_module,
)
from .gradcheck import check_input_gradient, check_parameter_gradients

__all__ = [
    "Vocabulary",
    "split_text",
    "join_tokens",
    "Generator",
    "Discriminator",
    "SoftSequence",
    "decode_greedy",
    "decode_beam",
    "save_checkpoint",
    "load_checkpoint",
    "save_module",
    "load_module",
    "check_parameter_gradients",
    "check_input_gradient",
]
