"""Turning joint-format training examples into token batches with tuple
spans the confounder can shuffle."""

from dataclasses import dataclass, replace

import torch

from ..errors import ValidationError
from ..neural.vocab import Vocabulary

HINT_MARKER = " hint: ("
SEP = "<|sep|>"


@dataclass(frozen=True)
class BatchRecord:
    """Token ids plus (start, end) tuple spans within tgt_ids."""

    src_ids: tuple
    tgt_ids: tuple
    subject_span: tuple
    relation_span: tuple
    object_span: tuple
    context_ids: tuple  # discriminator context: source without the hint

    def span_tokens(self, span):
        return self.tgt_ids[span[0] : span[1]]


def strip_hint(source_text):
    pos = source_text.find(HINT_MARKER)
    return source_text if pos < 0 else source_text[:pos]


def record_from_example(ex, vocab: Vocabulary):
    if ex.format != "joint":
        raise ValidationError("batch records require joint-format examples")
    tgt_ids = vocab.encode(ex.target_text)
    try:
        i_subj = tgt_ids.index(vocab.index["<subject>"])
        i_rel = tgt_ids.index(vocab.index["<relation>"])
        i_obj = tgt_ids.index(vocab.index["<object>"])
    except ValueError:
        raise ValidationError(f"target lacks tuple symbols: {ex.target_text!r}")
    if not 0 <= i_subj < i_rel < i_obj < len(tgt_ids):
        raise ValidationError("tuple symbols out of order in target")
    return BatchRecord(
        src_ids=tuple(vocab.encode(ex.source_text)),
        tgt_ids=tuple(tgt_ids),
        subject_span=(i_subj + 1, i_rel),
        relation_span=(i_rel + 1, i_obj),
        object_span=(i_obj + 1, len(tgt_ids)),
        context_ids=tuple(vocab.encode(strip_hint(ex.source_text))),
    )


def replace_object(record, new_object_tokens):
    start, _ = record.object_span
    tgt = record.tgt_ids[:start] + tuple(new_object_tokens)
    return replace(
        record,
        tgt_ids=tgt,
        object_span=(start, len(tgt)),
    )


def replace_subject(record, new_subject_tokens):
    s, e = record.subject_span
    delta = len(new_subject_tokens) - (e - s)
    tgt = record.tgt_ids[:s] + tuple(new_subject_tokens) + record.tgt_ids[e:]
    return replace(
        record,
        tgt_ids=tgt,
        subject_span=(s, s + len(new_subject_tokens)),
        relation_span=(record.relation_span[0] + delta,
                       record.relation_span[1] + delta),
        object_span=(record.object_span[0] + delta,
                     record.object_span[1] + delta),
    )


def disc_input_ids(record, vocab, assertion_ids=None):
    """Discriminator token input: context, separator, assertion tuple.

    The hint never reaches the discriminator. ``assertion_ids`` overrides
    the record's own target (e.g. for scoring arbitrary text).
    """
    assertion = tuple(assertion_ids) if assertion_ids is not None else record.tgt_ids
    return record.context_ids + (vocab.index[SEP],) + assertion


def pad_batch(sequences, pad_id, device=None):
    width = max(len(s) for s in sequences)
    out = torch.full((len(sequences), width), pad_id, dtype=torch.long, device=device)
    for i, s in enumerate(sequences):
        out[i, : len(s)] = torch.tensor(s, dtype=torch.long)
    return out
