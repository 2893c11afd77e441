"""Alternating adversarial training of the generator/discriminator pair,
plus assertion scoring with the trained discriminator."""

import json
import math
import random
from pathlib import Path

import torch
import torch.nn.functional as F

from ..bridge import bridge_sequence, knn_roundtrip_accuracy
from ..errors import ValidationError
from ..neural.checkpoint import save_module
from ..neural.decode import decode_greedy
from ..neural.model import Discriminator, Generator
from ..neural.vocab import Vocabulary
from .batching import disc_input_ids, pad_batch, record_from_example
from .confounder import confounder_shuffle

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8


def _model_extra(cfg):
    return {
        "d_model": cfg.d_model,
        "n_heads": cfg.n_heads,
        "n_layers": cfg.n_layers,
        "d_ff": cfg.d_ff,
        "max_len": cfg.max_len,
    }


def build_models(vocab, cfg):
    torch.manual_seed(cfg.seed)
    kw = dict(
        vocab_size=len(vocab),
        d_model=cfg.d_model,
        n_heads=cfg.n_heads,
        n_layers=cfg.n_layers,
        d_ff=cfg.d_ff,
        max_len=cfg.max_len,
        pad_id=vocab.pad_id,
    )
    return Generator(**kw), Discriminator(**kw)


def teacher_forced_ce(g, batch, pad_id, bos_id, eos_id):
    dec_in = pad_batch([(bos_id,) + r.tgt_ids for r in batch], pad_id)
    labels = pad_batch([r.tgt_ids + (eos_id,) for r in batch], pad_id)
    src = pad_batch([r.src_ids for r in batch], pad_id)
    logits = g(src, dec_in)
    return F.cross_entropy(
        logits.reshape(-1, logits.shape[-1]), labels.reshape(-1),
        ignore_index=pad_id,
    )


def make_fake_decodes(g, records, cfg, vocab, detach=False):
    """Greedy-decode a few records into (record, SoftSequence) pairs."""
    fakes = []
    for rec in records:
        src = torch.tensor(rec.src_ids, dtype=torch.long)
        _, soft = decode_greedy(
            g, src, cfg.max_decode_steps, bos_id=vocab.bos_id, eos_id=vocab.eos_id
        )
        if detach:
            soft.steps = soft.steps.detach()
        fakes.append((rec, soft))
    return fakes


def _disc_logit_for_fake(d, rec, soft, cfg, vocab):
    ctx = rec.context_ids + (vocab.index["<|sep|>"],)
    ctx_vecs = d.embed_tokens(torch.tensor(ctx, dtype=torch.long))
    bridged = bridge_sequence(soft, d.embedding.weight, cfg.bridge_scale)
    return d.logit(inputs_embeds=torch.cat([ctx_vecs, bridged.to(ctx_vecs.dtype)]))


def discriminator_step(d, opt_d, real, fakes, confounded, cfg, vocab):
    """One BCE step on the discriminator: real=1, fake=0, confounded=0."""
    losses = []
    if real:
        ids = pad_batch([disc_input_ids(r, vocab) for r in real], vocab.pad_id)
        logits = d.logit(input_ids=ids)
        losses.append(F.binary_cross_entropy_with_logits(
            logits, torch.ones_like(logits)))
    for rec, soft in fakes:
        logit = _disc_logit_for_fake(d, rec, soft, cfg, vocab)
        losses.append(F.binary_cross_entropy_with_logits(
            logit, torch.zeros_like(logit)))
    if cfg.confounder and confounded:
        ids = pad_batch([disc_input_ids(r, vocab) for r in confounded], vocab.pad_id)
        logits = d.logit(input_ids=ids)
        losses.append(F.binary_cross_entropy_with_logits(
            logits, torch.zeros_like(logits)))
    loss = torch.stack([l if l.dim() == 0 else l.mean() for l in losses]).mean()
    if not torch.isfinite(loss):
        raise ValidationError("non-finite discriminator loss")
    opt_d.zero_grad()
    loss.backward()
    opt_d.step()
    return float(loss.detach())


def generator_step(g, d, opt_g, batch, cfg, vocab):
    """One generator step: weighted cross-entropy plus (optionally) the
    adversarial term through the bridge. Discriminator parameters are only
    read, never stepped."""
    ce = teacher_forced_ce(g, batch, vocab.pad_id, vocab.bos_id, vocab.eos_id)
    adv = torch.zeros((), dtype=ce.dtype)
    if cfg.adversarial and cfg.lambda_adv > 0:
        picks = batch[: max(1, min(cfg.adv_samples, len(batch)))]
        fakes = make_fake_decodes(g, picks, cfg, vocab, detach=False)
        terms = []
        for rec, soft in fakes:
            score = torch.sigmoid(_disc_logit_for_fake(d, rec, soft, cfg, vocab))
            terms.append(-torch.log(score.clamp(min=1e-12)))
        adv = torch.stack(terms).mean()
    total = cfg.lambda_ce * ce + cfg.lambda_adv * adv
    if not torch.isfinite(total):
        raise ValidationError("non-finite generator loss")
    opt_g.zero_grad()
    total.backward()
    opt_g.step()
    # adversarial backward leaves gradients on d; drop them so the next
    # discriminator step starts clean
    for p in d.parameters():
        p.grad = None
    return float(ce.detach()), float(adv.detach())


def iter_batches(records, batch_size, rng):
    order = list(range(len(records)))
    rng.shuffle(order)
    for i in range(0, len(order), batch_size):
        yield [records[j] for j in order[i : i + batch_size]]


def train(examples, cfg, vocab=None, out_dir=None, min_freq=2, log=None):
    """Alternating D/G training over joint-format examples.

    Returns (generator, discriminator, vocab, metrics) where metrics is a
    list of per-step dicts, also written as JSONL under out_dir.
    """
    if not examples:
        raise ValidationError("empty dataset")
    if vocab is None:
        texts = [ex.source_text for ex in examples] + [ex.target_text for ex in examples]
        vocab = Vocabulary.build(texts, min_freq=min_freq)
    records = [record_from_example(ex, vocab) for ex in examples]
    g, d = build_models(vocab, cfg)
    opt_g = torch.optim.Adam(g.parameters(), lr=cfg.lr_g, betas=ADAM_BETAS,
                             eps=ADAM_EPS)
    opt_d = torch.optim.Adam(d.parameters(), lr=cfg.lr_d, betas=ADAM_BETAS,
                             eps=ADAM_EPS)
    rng = random.Random(cfg.seed)
    metrics = []
    out_dir = Path(out_dir) if out_dir else None
    log_fh = None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        vocab.save(out_dir / "vocab.json")
        log_fh = open(out_dir / "metrics.jsonl", "w", encoding="utf-8")
    step = 0
    try:
        for epoch in range(cfg.epochs):
            for batch in iter_batches(records, cfg.batch_size, rng):
                entry = {"step": step, "epoch": epoch}
                if cfg.adversarial:
                    fakes = make_fake_decodes(
                        g, batch[: max(1, min(cfg.adv_samples, len(batch)))],
                        cfg, vocab, detach=True,
                    )
                else:
                    fakes = []
                confounded, _ = (
                    confounder_shuffle(batch, rng, cfg.shuffle_subjects)
                    if cfg.confounder
                    else ([], False)
                )
                if cfg.adversarial or cfg.confounder:
                    entry["d_loss"] = discriminator_step(
                        d, opt_d, batch, fakes, confounded, cfg, vocab
                    )
                ce, adv = generator_step(g, d, opt_g, batch, cfg, vocab)
                entry["g_ce"], entry["g_adv"] = ce, adv
                if fakes and cfg.roundtrip_every and step % cfg.roundtrip_every == 0:
                    samples = [
                        torch.log(row + 1e-30)
                        for _, soft in fakes
                        for row in soft.steps
                    ]
                    entry["roundtrip_acc"] = knn_roundtrip_accuracy(
                        d.embedding.weight.detach(), samples, cfg.bridge_scale
                    )
                metrics.append(entry)
                if log_fh:
                    log_fh.write(json.dumps(entry) + "\n")
                if log:
                    log(entry)
                step += 1
            if out_dir:
                extra = _model_extra(cfg)
                save_module(out_dir / f"generator.epoch{epoch + 1}.ckpt", g,
                            step=step, vocab_hash=vocab.content_hash(),
                            extra=extra)
                save_module(out_dir / f"discriminator.epoch{epoch + 1}.ckpt", d,
                            step=step, vocab_hash=vocab.content_hash(),
                            extra=extra)
    finally:
        if log_fh:
            log_fh.close()
    if out_dir:
        extra = _model_extra(cfg)
        save_module(out_dir / "generator.ckpt", g, step=step,
                    vocab_hash=vocab.content_hash(), extra=extra)
        save_module(out_dir / "discriminator.ckpt", d, step=step,
                    vocab_hash=vocab.content_hash(), extra=extra)
    return g, d, vocab, metrics


def render_scoring_input(story_text, target_sentence, assertion_text):
    return f"{story_text} <|target|> {target_sentence} <|sep|> {assertion_text}"


def score_assertion(d, vocab, story_text, target_sentence, assertion_text,
                    threshold=0.5):
    """(score, label) for one assertion in context; label = score >= threshold."""
    ids = torch.tensor(
        vocab.encode(render_scoring_input(story_text, target_sentence,
                                          assertion_text)),
        dtype=torch.long,
    )
    with torch.no_grad():
        score = float(d(input_ids=ids))
    if math.isnan(score):
        raise ValidationError("discriminator produced NaN score")
    return score, score >= threshold
