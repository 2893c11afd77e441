"""Greedy and length-normalized beam decoding.

Both return the winning token ids plus a SoftSequence: the per-step full
softmax rows of the winning path, which is what the differentiable bridge
feeds to the discriminator.
"""

from dataclasses import dataclass

import torch

from ..errors import ValidationError


@dataclass
class SoftSequence:
    """Per-step probability vectors over the vocabulary, stacked [T, V]."""

    steps: torch.Tensor

    def __post_init__(self):
        if self.steps.dim() != 2:
            raise ValidationError("SoftSequence expects a [T, V] tensor")

    def __len__(self):
        return self.steps.shape[0]

    def argmax_ids(self):
        return self.steps.argmax(dim=-1).tolist()

    def validate(self, tol=1e-5):
        sums = self.steps.sum(dim=-1)
        ok = torch.all(self.steps >= 0) and torch.all(torch.abs(sums - 1.0) <= tol)
        if not ok:
            raise ValidationError("SoftSequence rows are not normalized")


def decode_greedy(g, src_ids, max_steps, bos_id=1, eos_id=2):
    """Greedy next-token decoding; stops after emitting eos or at max_steps.

    Runs with gradients enabled so the returned softmaxes stay connected to
    the generator parameters.
    """
    if max_steps < 1:
        raise ValidationError("max_steps must be >= 1")
    prefix = [bos_id]
    rows = []
    out = []
    for _ in range(max_steps):
        tgt = torch.tensor(prefix, dtype=torch.long, device=src_ids.device)
        logits = g(src_ids, tgt)
        probs = torch.softmax(logits[-1], dim=-1)
        rows.append(probs)
        token = int(probs.argmax())
        out.append(token)
        prefix.append(token)
        if token == eos_id:
            break
    return out, SoftSequence(torch.stack(rows))


def decode_beam(g, src_ids, width, max_steps, bos_id=1, eos_id=2,
                length_alpha=1.0):
    """Length-normalized beam search; the SoftSequence is assembled from the
    winning beam's per-step softmax rows."""
    if width < 1:
        raise ValidationError("width must be >= 1")
    if max_steps < 1:
        raise ValidationError("max_steps must be >= 1")

    # beams: (prefix ids incl bos, cumulative logprob, softmax rows, done)
    beams = [([bos_id], 0.0, [], False)]
    for _ in range(max_steps):
        if all(done for *_, done in beams):
            break
        candidates = []
        for prefix, logp, rows, done in beams:
            if done:
                candidates.append((prefix, logp, rows, True))
                continue
            tgt = torch.tensor(prefix, dtype=torch.long, device=src_ids.device)
            logits = g(src_ids, tgt)
            probs = torch.softmax(logits[-1], dim=-1)
            logprobs = torch.log(probs + 1e-30)
            top = torch.topk(logprobs, min(width, probs.shape[-1]))
            for lp, tok in zip(top.values.tolist(), top.indices.tolist()):
                candidates.append(
                    (prefix + [tok], logp + lp, rows + [probs], tok == eos_id)
                )
        candidates.sort(key=lambda c: c[1] / max(1, len(c[0]) - 1) ** length_alpha,
                        reverse=True)
        beams = candidates[:width]

    prefix, _, rows, _ = beams[0]
    return prefix[1:], SoftSequence(torch.stack(rows))
