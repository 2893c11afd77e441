"""Toy encoder-decoder generator and sequence-scorer discriminator.

Both models share the vocabulary (not the embedding weights: the
discriminator keeps its own copy). The generator ties its output projection
to its token embedding.
"""

import math

import torch
from torch import nn

from ..errors import ValidationError


def sinusoidal_positions(max_len, d_model, dtype=torch.float32):
    pos = torch.arange(max_len, dtype=dtype).unsqueeze(1)
    div = torch.exp(
        torch.arange(0, d_model, 2, dtype=dtype) * (-math.log(10000.0) / d_model)
    )
    pe = torch.zeros(max_len, d_model, dtype=dtype)
    pe[:, 0::2] = torch.sin(pos * div)
    pe[:, 1::2] = torch.cos(pos * div)
    return pe


class EncoderBlock(nn.Module):
    def __init__(self, d_model, n_heads, d_ff):
        super().__init__()
        self.attn = nn.MultiheadAttention(d_model, n_heads, batch_first=True)
        self.ff1 = nn.Linear(d_model, d_ff)
        self.ff2 = nn.Linear(d_ff, d_model)
        self.ln1 = nn.LayerNorm(d_model)
        self.ln2 = nn.LayerNorm(d_model)

    def forward(self, x, key_padding_mask=None):
        h, _ = self.attn(x, x, x, key_padding_mask=key_padding_mask,
                         need_weights=False)
        x = self.ln1(x + h)
        f = self.ff2(torch.relu(self.ff1(x)))
        return self.ln2(x + f)


class DecoderBlock(nn.Module):
    def __init__(self, d_model, n_heads, d_ff):
        super().__init__()
        self.self_attn = nn.MultiheadAttention(d_model, n_heads, batch_first=True)
        self.cross_attn = nn.MultiheadAttention(d_model, n_heads, batch_first=True)
        self.ff1 = nn.Linear(d_model, d_ff)
        self.ff2 = nn.Linear(d_ff, d_model)
        self.ln1 = nn.LayerNorm(d_model)
        self.ln2 = nn.LayerNorm(d_model)
        self.ln3 = nn.LayerNorm(d_model)

    def forward(self, x, memory, causal_mask, memory_key_padding_mask=None):
        h, _ = self.self_attn(x, x, x, attn_mask=causal_mask, need_weights=False)
        x = self.ln1(x + h)
        h, _ = self.cross_attn(
            x, memory, memory,
            key_padding_mask=memory_key_padding_mask,
            need_weights=False,
        )
        x = self.ln2(x + h)
        f = self.ff2(torch.relu(self.ff1(x)))
        return self.ln3(x + f)


class Generator(nn.Module):
    """Encoder-decoder over token ids; output projection tied to the
    embedding matrix."""

    def __init__(self, vocab_size, d_model=64, n_heads=4, n_layers=2,
                 d_ff=128, max_len=128, pad_id=0):
        super().__init__()
        self.d_model = d_model
        self.max_len = max_len
        self.pad_id = pad_id
        self.embedding = nn.Embedding(vocab_size, d_model)
        self.register_buffer(
            "positions", sinusoidal_positions(max_len, d_model), persistent=False
        )
        self.encoder = nn.ModuleList(
            EncoderBlock(d_model, n_heads, d_ff) for _ in range(n_layers)
        )
        self.decoder = nn.ModuleList(
            DecoderBlock(d_model, n_heads, d_ff) for _ in range(n_layers)
        )

    def _embed(self, ids):
        T = ids.shape[-1]
        if T > self.max_len:
            raise ValidationError(f"sequence length {T} exceeds max_len {self.max_len}")
        return self.embedding(ids) * math.sqrt(self.d_model) + self.positions[:T].to(
            self.embedding.weight.dtype
        )

    def encode(self, src_ids):
        pad_mask = src_ids == self.pad_id
        x = self._embed(src_ids)
        for block in self.encoder:
            x = block(x, key_padding_mask=pad_mask)
        return x, pad_mask

    def forward(self, src_ids, tgt_ids):
        """Teacher-forced logits, shape [B, T, V]."""
        squeeze = src_ids.dim() == 1
        if squeeze:
            src_ids, tgt_ids = src_ids.unsqueeze(0), tgt_ids.unsqueeze(0)
        memory, mem_pad = self.encode(src_ids)
        T = tgt_ids.shape[1]
        causal = torch.triu(
            torch.full((T, T), float("-inf"), dtype=self.embedding.weight.dtype),
            diagonal=1,
        ).to(tgt_ids.device)
        x = self._embed(tgt_ids)
        for block in self.decoder:
            x = block(x, memory, causal, memory_key_padding_mask=mem_pad)
        logits = x @ self.embedding.weight.T
        return logits.squeeze(0) if squeeze else logits


class Discriminator(nn.Module):
    """Encoder with a mean-pool head producing one logit; score = sigmoid.

    Accepts token ids or pre-embedded vectors (the bridge path); both share
    all downstream weights.
    """

    def __init__(self, vocab_size, d_model=64, n_heads=4, n_layers=2,
                 d_ff=128, max_len=128, pad_id=0):
        super().__init__()
        self.d_model = d_model
        self.max_len = max_len
        self.pad_id = pad_id
        self.embedding = nn.Embedding(vocab_size, d_model)
        self.register_buffer(
            "positions", sinusoidal_positions(max_len, d_model), persistent=False
        )
        self.encoder = nn.ModuleList(
            EncoderBlock(d_model, n_heads, d_ff) for _ in range(n_layers)
        )
        self.head = nn.Linear(d_model, 1)

    def embed_tokens(self, ids):
        """Raw embedding rows for ids (no position/scale), for mixing with
        bridged vectors."""
        return self.embedding(ids)

    def logit(self, input_ids=None, inputs_embeds=None, pad_mask=None):
        if (input_ids is None) == (inputs_embeds is None):
            raise ValidationError("pass exactly one of input_ids/inputs_embeds")
        if input_ids is not None:
            squeeze = input_ids.dim() == 1
            if squeeze:
                input_ids = input_ids.unsqueeze(0)
            pad_mask = input_ids == self.pad_id
            x = self.embedding(input_ids)
        else:
            squeeze = inputs_embeds.dim() == 2
            if squeeze:
                inputs_embeds = inputs_embeds.unsqueeze(0)
            if inputs_embeds.shape[-1] != self.d_model:
                raise ValidationError(
                    f"embedded input width {inputs_embeds.shape[-1]} != "
                    f"d_model {self.d_model}"
                )
            x = inputs_embeds
            if pad_mask is None:
                pad_mask = torch.zeros(
                    x.shape[:2], dtype=torch.bool, device=x.device
                )
            elif pad_mask.dim() == 1:
                pad_mask = pad_mask.unsqueeze(0)
        T = x.shape[1]
        if T > self.max_len:
            raise ValidationError(f"sequence length {T} exceeds max_len {self.max_len}")
        x = x * math.sqrt(self.d_model) + self.positions[:T].to(x.dtype)
        for block in self.encoder:
            x = block(x, key_padding_mask=pad_mask)
        keep = (~pad_mask).to(x.dtype).unsqueeze(-1)
        pooled = (x * keep).sum(dim=1) / keep.sum(dim=1).clamp(min=1.0)
        out = self.head(pooled).squeeze(-1)
        return out.squeeze(0) if squeeze else out

    def forward(self, input_ids=None, inputs_embeds=None, pad_mask=None):
        """Score in (0, 1)."""
        return torch.sigmoid(self.logit(input_ids, inputs_embeds, pad_mask))
