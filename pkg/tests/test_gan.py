import json
import math
import random

import pytest
import torch

from hintgan.errors import ValidationError
from hintgan.gan import (
    GanConfig,
    confounder_shuffle,
    score_assertion,
    train,
)
from hintgan.gan.batching import (
    disc_input_ids,
    pad_batch,
    record_from_example,
    strip_hint,
)
from hintgan.gan.loop import (
    build_models,
    discriminator_step,
    generator_step,
    render_scoring_input,
    teacher_forced_ce,
)
from hintgan.neural import Vocabulary

from conftest import synthetic_joint_examples


def small_config(**kw):
    base = dict(epochs=1, batch_size=4, d_model=32, n_heads=2, n_layers=1,
                d_ff=32, max_len=96, max_decode_steps=8, adv_samples=1,
                roundtrip_every=1)
    base.update(kw)
    return GanConfig(**base)


def build_corpus(n=16, seed=0):
    examples = synthetic_joint_examples(n, seed=seed)
    texts = [ex.source_text for ex in examples] + [ex.target_text for ex in examples]
    vocab = Vocabulary.build(texts, min_freq=1)
    records = [record_from_example(ex, vocab) for ex in examples]
    return examples, vocab, records


class TestConfig:
    def test_defaults(self):
        cfg = GanConfig()
        assert cfg.batch_size == 32
        assert cfg.epochs == 3
        assert cfg.lr_g == 1e-5 and cfg.lr_d == 1e-5
        assert cfg.score_threshold == 0.5
        assert cfg.p_hint == 0.5

    def test_validation(self):
        with pytest.raises(ValidationError):
            GanConfig(lambda_adv=-1)
        with pytest.raises(ValidationError):
            GanConfig(score_threshold=1.5)

    def test_json_round_trip(self, tmp_path):
        cfg = GanConfig(epochs=7, lambda_adv=0.3)
        cfg.to_json(tmp_path / "c.json")
        assert GanConfig.from_json(tmp_path / "c.json") == cfg


class TestBatching:
    def test_strip_hint(self):
        assert strip_hint("story <|target|> s hint: (<|subj|> x)") == (
            "story <|target|> s")
        assert strip_hint("no hint here") == "no hint here"

    def test_record_spans(self):
        examples, vocab, records = build_corpus(1)
        rec = records[0]
        subj = rec.span_tokens(rec.subject_span)
        rel = rec.span_tokens(rec.relation_span)
        obj = rec.span_tokens(rec.object_span)
        target = examples[0].target_text
        assert vocab.decode(subj) == target.split("<subject> ")[1].split(
            " <relation>")[0]
        assert vocab.decode(rel) == "is a"
        assert vocab.decode(obj).startswith(target.split("<object> ")[1].split()[0])

    def test_non_joint_rejected(self):
        examples, vocab, _ = build_corpus(1)
        bad = examples[0].__class__(**{**examples[0].to_dict(),
                                       "format": "paracomet"})
        with pytest.raises(ValidationError):
            record_from_example(bad, vocab)

    def test_hint_never_reaches_discriminator(self):
        examples, vocab, _ = build_corpus(1)
        ex = examples[0]
        hinted = ex.__class__(**{
            **ex.to_dict(),
            "source_text": ex.source_text + " hint: (<|subj|> ball)",
            "hinted": True,
        })
        rec = record_from_example(hinted, vocab)
        ids = disc_input_ids(rec, vocab)
        decoded = vocab.decode(ids)
        assert "hint" not in decoded
        assert "<|sep|>" in decoded

    def test_pad_batch(self):
        out = pad_batch([(1, 2, 3), (4,)], pad_id=0)
        assert out.tolist() == [[1, 2, 3], [4, 0, 0]]


class TestConfounder:
    def test_pair_swap(self):
        _, _, records = build_corpus(2)
        rng = random.Random(0)
        shuffled, skipped = confounder_shuffle(records[:2], rng)
        assert not skipped
        assert shuffled[0].span_tokens(shuffled[0].object_span) == \
            records[1].span_tokens(records[1].object_span)
        assert shuffled[1].span_tokens(shuffled[1].object_span) == \
            records[0].span_tokens(records[0].object_span)

    def test_singleton_skipped(self):
        _, _, records = build_corpus(1)
        shuffled, skipped = confounder_shuffle(records[:1], random.Random(0))
        assert skipped
        assert shuffled == records[:1]

    def test_derangement_and_multiset(self):
        _, _, records = build_corpus(16)
        for seed in range(50):
            rng = random.Random(seed)
            size = rng.randint(2, len(records))
            batch = records[:size]
            shuffled, skipped = confounder_shuffle(batch, rng)
            assert not skipped
            before = sorted(r.span_tokens(r.object_span) for r in batch)
            after = sorted(r.span_tokens(r.object_span) for r in shuffled)
            assert before == after
            moved = [
                r.span_tokens(r.object_span) != s.span_tokens(s.object_span)
                for r, s in zip(batch, shuffled)
            ]
            # distinct objects must all have moved
            for i, ok in enumerate(moved):
                if not ok:
                    assert before.count(batch[i].span_tokens(
                        batch[i].object_span)) > 1

    def test_subject_mode(self):
        _, _, records = build_corpus(4)
        shuffled, _ = confounder_shuffle(records[:4], random.Random(1),
                                         shuffle_subjects=True)
        before = sorted(r.span_tokens(r.subject_span) for r in records[:4])
        after = sorted(r.span_tokens(r.subject_span) for r in shuffled)
        assert before == after


class TestSteps:
    def _zero_head(self, d):
        with torch.no_grad():
            d.head.weight.zero_()
            d.head.bias.zero_()

    def test_uninformative_discriminator_loss(self):
        cfg = small_config(confounder=False, adversarial=False)
        _, vocab, records = build_corpus(4)
        _, d = build_models(vocab, cfg)
        self._zero_head(d)
        opt_d = torch.optim.SGD(d.parameters(), lr=0.0)
        loss = discriminator_step(d, opt_d, records[:4], [], [], cfg, vocab)
        assert abs(loss - math.log(2.0)) < 1e-6

    def test_confounder_flag_changes_loss(self):
        _, vocab, records = build_corpus(4)
        cfg_on = small_config(confounder=True)
        cfg_off = small_config(confounder=False)
        g, d = build_models(vocab, cfg_on)
        confounded, _ = confounder_shuffle(records[:4], random.Random(0))
        opt = torch.optim.SGD(d.parameters(), lr=0.0)
        loss_on = discriminator_step(d, opt, records[:4], [], confounded,
                                     cfg_on, vocab)
        loss_off = discriminator_step(d, opt, records[:4], [], confounded,
                                      cfg_off, vocab)
        assert loss_on != loss_off

    def test_generator_step_isolates_discriminator(self):
        cfg = small_config(adversarial=True, lambda_adv=0.5, lr_g=1e-3)
        _, vocab, records = build_corpus(4)
        g, d = build_models(vocab, cfg)
        opt_g = torch.optim.Adam(g.parameters(), lr=cfg.lr_g)
        before = [p.detach().clone() for p in d.parameters()]
        g_before = [p.detach().clone() for p in g.parameters()]
        generator_step(g, d, opt_g, records[:4], cfg, vocab)
        for p, b in zip(d.parameters(), before):
            assert torch.equal(p, b)
        assert any(not torch.equal(p, b)
                   for p, b in zip(g.parameters(), g_before))
        assert all(p.grad is None or not p.grad.any() for p in d.parameters())

    def test_discriminator_step_isolates_generator(self):
        cfg = small_config(lr_d=1e-3)
        _, vocab, records = build_corpus(4)
        g, d = build_models(vocab, cfg)
        opt_d = torch.optim.Adam(d.parameters(), lr=cfg.lr_d)
        g_before = [p.detach().clone() for p in g.parameters()]
        confounded, _ = confounder_shuffle(records[:4], random.Random(0))
        discriminator_step(d, opt_d, records[:4], [], confounded, cfg, vocab)
        for p, b in zip(g.parameters(), g_before):
            assert torch.equal(p, b)

    def test_adversarial_gradient_reaches_generator_embedding(self):
        cfg = small_config(adversarial=True, lambda_ce=0.0, lambda_adv=1.0)
        _, vocab, records = build_corpus(2)
        g, d = build_models(vocab, cfg)
        opt_g = torch.optim.SGD(g.parameters(), lr=0.0)
        generator_step(g, d, opt_g, records[:2], cfg, vocab)
        assert g.embedding.weight.grad is not None
        assert float(g.embedding.weight.grad.abs().sum()) > 0

    def test_teacher_forced_ce_finite(self):
        cfg = small_config()
        _, vocab, records = build_corpus(4)
        g, _ = build_models(vocab, cfg)
        ce = teacher_forced_ce(g, records[:4], vocab.pad_id, vocab.bos_id,
                               vocab.eos_id)
        assert torch.isfinite(ce)


class TestTrainLoop:
    def test_smoke(self, tmp_path):
        examples = synthetic_joint_examples(8)
        cfg = small_config(batch_size=4, lambda_adv=0.05)
        g, d, vocab, metrics = train(examples, cfg, out_dir=tmp_path,
                                     min_freq=1)
        assert len(metrics) == 2
        for entry in metrics:
            assert math.isfinite(entry["d_loss"])
            assert math.isfinite(entry["g_ce"])
            assert math.isfinite(entry["g_adv"])
        assert "roundtrip_acc" in metrics[0]
        assert (tmp_path / "generator.ckpt").exists()
        assert (tmp_path / "discriminator.ckpt").exists()
        assert (tmp_path / "generator.epoch1.ckpt").exists()
        assert (tmp_path / "vocab.json").exists()
        logged = [json.loads(l) for l in
                  (tmp_path / "metrics.jsonl").read_text().splitlines()]
        assert logged == metrics

    def test_deterministic(self):
        examples = synthetic_joint_examples(8)
        cfg = small_config(batch_size=4, adversarial=False, confounder=False)
        _, _, _, m1 = train(examples, cfg, min_freq=1)
        _, _, _, m2 = train(examples, cfg, min_freq=1)
        assert m1 == m2

    def test_empty_dataset_rejected(self):
        with pytest.raises(ValidationError):
            train([], small_config())

    def test_supervised_only_mode_has_no_d_loss(self):
        examples = synthetic_joint_examples(8)
        cfg = small_config(batch_size=4, adversarial=False, confounder=False)
        _, _, _, metrics = train(examples, cfg, min_freq=1)
        assert all("d_loss" not in entry for entry in metrics)
        assert all(entry["g_adv"] == 0.0 for entry in metrics)


class TestScoring:
    def test_threshold_boundary_is_true(self):
        cfg = small_config()
        _, vocab, _ = build_corpus(2)
        _, d = build_models(vocab, cfg)
        with torch.no_grad():
            d.head.weight.zero_()
            d.head.bias.zero_()
        score, label = score_assertion(d, vocab, "a story .", "a sentence .",
                                       "thing is a red thing", threshold=0.5)
        assert score == 0.5
        assert label is True

    def test_render_scoring_input(self):
        assert render_scoring_input("s1 .", "s2 .", "a is b") == (
            "s1 . <|target|> s2 . <|sep|> a is b")

    def test_context_sensitivity_no_crash(self):
        cfg = small_config()
        _, vocab, _ = build_corpus(2)
        _, d = build_models(vocab, cfg)
        s1, _ = score_assertion(d, vocab, "sam saw the red ball .", "it was red .",
                                "ball is a red thing")
        s2, _ = score_assertion(d, vocab, "sam saw the blue kite .", "it was blue .",
                                "ball is a red thing")
        assert 0.0 < s1 < 1.0 and 0.0 < s2 < 1.0
