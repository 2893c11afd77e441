"""Training configuration for the adversarial loop."""

import json
from dataclasses import asdict, dataclass

from ..errors import ValidationError


@dataclass
class GanConfig:
    lambda_ce: float = 1.0
    lambda_adv: float = 0.1
    batch_size: int = 32
    epochs: int = 3
    lr_g: float = 1e-5
    lr_d: float = 1e-5
    p_hint: float = 0.5
    confounder: bool = True
    adversarial: bool = True
    seed: int = 0
    score_threshold: float = 0.5
    # confounders shuffle objects; optionally subjects too
    shuffle_subjects: bool = False
    # toy model dimensions
    d_model: int = 64
    n_heads: int = 4
    n_layers: int = 2
    d_ff: int = 128
    max_len: int = 128
    max_decode_steps: int = 24
    bridge_scale: float = 1.0
    # how many fake decodes feed the discriminator/adversarial term per batch
    adv_samples: int = 2
    roundtrip_every: int = 50

    def __post_init__(self):
        if self.lambda_ce < 0 or self.lambda_adv < 0:
            raise ValidationError("loss weights must be >= 0")
        if not 0.0 < self.score_threshold < 1.0:
            raise ValidationError("score_threshold must be in (0,1)")

    def to_json(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2)

    @classmethod
    def from_json(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(**json.load(fh))
