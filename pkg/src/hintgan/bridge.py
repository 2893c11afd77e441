"""Differentiable connection from generator softmaxes to discriminator
embedding space.

soft_embed replaces the embedding lookup of an argmax token with
softmax(scale * logits) @ E: a convex combination of embedding rows that
keeps gradients flowing from the discriminator loss back into the
generator. The K=1 round-trip check validates how close the combination
stays to a real embedding row at a given scale.
"""

import torch

from .errors import ValidationError

DEFAULT_SCALE = 1.0
SWEEP_SCALES = (1.0, 2.0, 5.0, 10.0, 100.0)


def soft_embed(logits, E, scale=DEFAULT_SCALE):
    """softmax(scale * logits) @ E -> a length-d vector."""
    if scale <= 0:
        raise ValidationError("scale must be positive")
    if not torch.isfinite(logits).all():
        raise ValidationError("non-finite logits")
    if logits.shape[-1] != E.shape[0]:
        raise ValidationError(
            f"logits width {logits.shape[-1]} != vocab rows {E.shape[0]}"
        )
    return torch.softmax(scale * logits, dim=-1) @ E


def bridge_sequence(soft, E, scale=DEFAULT_SCALE):
    """Apply soft_embed per step of a SoftSequence.

    The stored rows are already probabilities, so they pass through the
    scaled softmax in log space: softmax(scale * log p) generalizes the
    stored distribution (scale=1 reproduces it exactly).
    """
    steps = soft.steps if hasattr(soft, "steps") else soft
    if steps.shape[-1] != E.shape[0]:
        raise ValidationError("vocabulary width mismatch between softmaxes and E")
    if scale == 1.0:
        return steps @ E
    return torch.softmax(scale * torch.log(steps + 1e-30), dim=-1) @ E


def knn_roundtrip_accuracy(E, samples, scale=DEFAULT_SCALE):
    """Fraction of logit samples whose soft embedding's Euclidean nearest
    row in E recovers the argmax token. Ties count when the neighbor is any
    argmax-tied token."""
    if len(samples) == 0:
        raise ValidationError("no samples")
    hits = 0
    for logits in samples:
        vec = soft_embed(logits, E, scale)
        dists = torch.cdist(vec.unsqueeze(0), E).squeeze(0)
        neighbor = int(dists.argmin())
        top = logits.max()
        tied = set(torch.nonzero(logits == top).view(-1).tolist())
        hits += neighbor in tied
    return hits / len(samples)


def scale_sweep(E, samples, scales=SWEEP_SCALES):
    """Diagnostic {scale: round-trip accuracy} map."""
    return {float(s): knn_roundtrip_accuracy(E, samples, float(s)) for s in scales}
