"""Pipeline command line: normalize, embed, align, hint, train, generate,
score, eval, gradcheck, bridge-sweep.

Exit codes: 0 success, 1 validation error, 2 io error.
"""

import json
import sys
from pathlib import Path

import click
import torch

from . import bridge as bridge_mod
from .align import (
    HashingTextEmbedder,
    align_corpus,
    read_aligned_jsonl,
    read_emb1,
    read_stories_jsonl,
    write_aligned_jsonl,
    write_emb1,
)
from .errors import ValidationError
from .gan import GanConfig, score_assertion, train as train_loop
from .hints import build_dataset, read_dataset
from .kb import (
    ParseStats,
    parse_source,
    read_assertions_jsonl,
    rename_variables,
    write_assertions_jsonl,
)
from .metrics import evaluate
from .neural import (
    Discriminator,
    Generator,
    Vocabulary,
    check_parameter_gradients,
    decode_beam,
    decode_greedy,
    load_checkpoint,
    load_module,
)


@click.group()
def cli():
    """Story-aligned assertion pipeline."""


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Abort:
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except ValidationError as e:
        click.echo(f"error: {e}", err=True)
        return 1
    except OSError as e:
        click.echo(f"io error: {e}", err=True)
        return 2
    except SystemExit as e:
        return int(e.code or 0)


@cli.command()
@click.option("--in", "in_path", required=True, type=click.Path())
@click.option("--source", required=True,
              type=click.Choice(["conceptnet", "atomic2020", "glucose"]))
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--rename/--no-rename", default=True,
              help="map PersonX/Y/Z to the underscore scheme")
def normalize(in_path, source, out_path, rename):
    """Parse a knowledge-base dump into canonical assertion JSONL."""
    stats = ParseStats()
    assertions = parse_source(in_path, source, stats=stats)
    if rename:
        assertions = [rename_variables(a) for a in assertions]
    write_assertions_jsonl(assertions, out_path)
    click.echo(f"wrote {len(assertions)} assertions, skipped {stats.skipped}")


@cli.command()
@click.option("--assertions", "assertions_path", type=click.Path())
@click.option("--stories", "stories_path", type=click.Path())
@click.option("--dim", default=256, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def embed(assertions_path, stories_path, dim, seed, out_path):
    """Vectorize assertions or stories with the builtin hashed embedder."""
    if (assertions_path is None) == (stories_path is None):
        raise ValidationError("pass exactly one of --assertions/--stories")
    embedder = HashingTextEmbedder(dim=dim, seed=seed)
    if assertions_path:
        items = read_assertions_jsonl(assertions_path)
        matrix = embedder.embed([a.id for a in items], [a.text() for a in items])
    else:
        items = read_stories_jsonl(stories_path)
        matrix = embedder.embed([s.story_id for s in items], [s.text for s in items])
    write_emb1(matrix, out_path)
    click.echo(f"wrote {len(matrix)} x {matrix.dim} embeddings to {out_path}")


@cli.command()
@click.option("--assertions", "assertions_path", required=True,
              type=click.Path())
@click.option("--stories", "stories_path", required=True,
              type=click.Path())
@click.option("--assertion-emb", required=True, type=click.Path())
@click.option("--story-emb", required=True, type=click.Path())
@click.option("--dim", default=256, show_default=True,
              help="embedder dim used for stage-2 sentence vectors")
@click.option("--seed", default=0, show_default=True)
@click.option("--mode", default="exact", show_default=True,
              type=click.Choice(["exact", "partitioned"]))
@click.option("--k-clusters", default=8, show_default=True)
@click.option("--n-probe", default=3, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
def align(assertions_path, stories_path, assertion_emb, story_emb, dim, seed,
          mode, k_clusters, n_probe, out_path):
    """Two-stage nearest-story / nearest-sentence alignment."""
    assertions = read_assertions_jsonl(assertions_path)
    stories = read_stories_jsonl(stories_path)
    a_emb = read_emb1(assertion_emb)
    s_emb = read_emb1(story_emb)
    if a_emb.dim != s_emb.dim:
        raise ValidationError(
            f"embedding dimension mismatch: assertions {a_emb.dim} vs "
            f"stories {s_emb.dim}"
        )
    if a_emb.dim != dim:
        raise ValidationError(
            f"embedding dimension mismatch: files have {a_emb.dim}, --dim is {dim}"
        )
    embedder = HashingTextEmbedder(dim=dim, seed=seed)
    kw = {"k_clusters": k_clusters, "n_probe": n_probe, "seed": seed} \
        if mode == "partitioned" else {}
    aligned = align_corpus(assertions, stories, a_emb, s_emb, embedder,
                           index_mode=mode, **kw)
    write_aligned_jsonl(aligned, out_path)
    click.echo(f"aligned {len(aligned)} assertions")


@cli.command()
@click.option("--aligned", "aligned_path", required=True,
              type=click.Path())
@click.option("--stories", "stories_path", required=True,
              type=click.Path())
@click.option("--p-hint", default=0.5, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--formats", "formats_json", default=None,
              help='JSON map source->format, e.g. {"conceptnet": "joint"}')
@click.option("--out", "out_path", required=True, type=click.Path())
def hint(aligned_path, stories_path, p_hint, seed, formats_json, out_path):
    """Render a shuffled hint-augmented dataset plus manifest."""
    aligned = read_aligned_jsonl(aligned_path)
    stories = read_stories_jsonl(stories_path)
    formats = json.loads(formats_json) if formats_json else None
    _, manifest = build_dataset(aligned, stories, out_path, formats=formats,
                                p_hint=p_hint, seed=seed)
    click.echo(json.dumps(manifest))


@cli.command()
@click.option("--dataset", "dataset_path", required=True,
              type=click.Path())
@click.option("--config", "config_path", type=click.Path())
@click.option("--epochs", type=int, default=None)
@click.option("--batch-size", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--adversarial/--no-adversarial", default=None)
@click.option("--confounder/--no-confounder", default=None)
@click.option("--out", "out_dir", required=True, type=click.Path())
def train(dataset_path, config_path, epochs, batch_size, seed, adversarial,
          confounder, out_dir):
    """Adversarially train the generator/discriminator pair."""
    cfg = GanConfig.from_json(config_path) if config_path else GanConfig()
    overrides = {
        "epochs": epochs,
        "batch_size": batch_size,
        "seed": seed,
        "adversarial": adversarial,
        "confounder": confounder,
    }
    for key, value in overrides.items():
        if value is not None:
            setattr(cfg, key, value)
    examples = [ex for ex in read_dataset(dataset_path) if ex.format == "joint"]
    if not examples:
        raise ValidationError("dataset has no joint-format examples to train on")
    _, _, _, metrics = train_loop(examples, cfg, out_dir=out_dir, min_freq=1)
    cfg.to_json(Path(out_dir) / "config.json")
    last = metrics[-1] if metrics else {}
    click.echo(f"trained {len(metrics)} steps; last: {json.dumps(last)}")


def _load_models(model_dir, need_generator=True, need_discriminator=False):
    model_dir = Path(model_dir)
    vocab = Vocabulary.load(model_dir / "vocab.json")
    g = d = None
    if need_generator:
        header, _ = load_checkpoint(model_dir / "generator.ckpt")
        dims = header.get("extra", {})
        g = Generator(vocab_size=len(vocab), pad_id=vocab.pad_id, **dims)
        load_module(model_dir / "generator.ckpt", g,
                    vocab_hash=vocab.content_hash())
        g.eval()
    if need_discriminator:
        header, _ = load_checkpoint(model_dir / "discriminator.ckpt")
        dims = header.get("extra", {})
        d = Discriminator(vocab_size=len(vocab), pad_id=vocab.pad_id, **dims)
        load_module(model_dir / "discriminator.ckpt", d,
                    vocab_hash=vocab.content_hash())
        d.eval()
    return g, d, vocab


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path())
@click.option("--story", required=True)
@click.option("--sentence", required=True, help="target sentence text")
@click.option("--hint", "hint_text", default=None,
              help='verbatim hint, e.g. "(<|subj|> the red team)"')
@click.option("--beam-width", default=4, show_default=True)
@click.option("--max-steps", default=24, show_default=True)
def generate(model_dir, story, sentence, hint_text, beam_width, max_steps):
    """Infer an assertion for a story and target sentence."""
    g, _, vocab = _load_models(model_dir)
    source = f"{story} <|target|> {sentence}"
    if hint_text:
        source += f" hint: {hint_text}"
    src = torch.tensor(vocab.encode(source), dtype=torch.long)
    with torch.no_grad():
        if beam_width <= 1:
            ids, _ = decode_greedy(g, src, max_steps, vocab.bos_id, vocab.eos_id)
        else:
            ids, _ = decode_beam(g, src, beam_width, max_steps, vocab.bos_id,
                                 vocab.eos_id)
    click.echo(vocab.decode(ids, skip_special=True))


@cli.command()
@click.option("--model", "model_dir", required=True, type=click.Path())
@click.option("--story", required=True)
@click.option("--sentence", required=True)
@click.option("--assertion", "assertion_text", required=True)
@click.option("--threshold", default=0.5, show_default=True)
def score(model_dir, story, sentence, assertion_text, threshold):
    """Score an assertion against its context with the discriminator."""
    _, d, vocab = _load_models(model_dir, need_generator=False,
                               need_discriminator=True)
    value, label = score_assertion(d, vocab, story, sentence, assertion_text,
                                   threshold)
    click.echo(json.dumps({"score": value, "label": bool(label)}))


@cli.command("eval")
@click.option("--preds", "preds_path", required=True, type=click.Path())
@click.option("--refs", "refs_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
def eval_cmd(preds_path, refs_path, out_path):
    """BLEU/ROUGE report for prediction/reference line files."""
    preds = Path(preds_path).read_text(encoding="utf-8").splitlines()
    refs = Path(refs_path).read_text(encoding="utf-8").splitlines()
    report = evaluate(preds, refs)
    Path(out_path).write_text(json.dumps(report.to_dict(), indent=2),
                              encoding="utf-8")
    click.echo(json.dumps(report.to_dict()))


@cli.command()
@click.option("--tolerance", default=1e-3, show_default=True)
def gradcheck(tolerance):
    """Finite-difference gradient check on a 64-bit micro model."""
    torch.manual_seed(0)
    V, d_model = 50, 16
    g = Generator(vocab_size=V, d_model=d_model, n_heads=2, n_layers=1,
                  d_ff=32, max_len=32).double()
    src = torch.randint(5, V, (2, 7))
    tgt = torch.randint(5, V, (2, 5))

    def g_loss():
        logits = g(src, tgt)
        return torch.nn.functional.cross_entropy(
            logits.reshape(-1, V), tgt.reshape(-1)
        )

    report = check_parameter_gradients(g, g_loss)
    worst = max(report.values())
    dsc = Discriminator(vocab_size=V, d_model=d_model, n_heads=2, n_layers=1,
                        d_ff=32, max_len=32).double()
    ids = torch.randint(5, V, (2, 7))

    def d_loss():
        logits = dsc.logit(input_ids=ids)
        return torch.nn.functional.binary_cross_entropy_with_logits(
            logits, torch.ones_like(logits)
        )

    report_d = check_parameter_gradients(dsc, d_loss)
    worst = max(worst, max(report_d.values()))
    click.echo(f"max relative error: {worst:.3e} (tolerance {tolerance:g})")
    if worst >= tolerance:
        raise ValidationError("gradient check failed")


@cli.command("bridge-sweep")
@click.option("--vocab-size", default=50, show_default=True)
@click.option("--dim", default=16, show_default=True)
@click.option("--samples", default=200, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "out_path", default=None, type=click.Path())
def bridge_sweep(vocab_size, dim, samples, seed, out_path):
    """Round-trip accuracy of the soft-argmax bridge across scales."""
    torch.manual_seed(seed)
    E = torch.randn(vocab_size, dim)
    logits = [torch.randn(vocab_size) for _ in range(samples)]
    report = bridge_mod.scale_sweep(E, logits)
    payload = json.dumps({str(k): v for k, v in report.items()}, indent=2)
    if out_path:
        Path(out_path).write_text(payload, encoding="utf-8")
    click.echo(payload)


if __name__ == "__main__":
    sys.exit(main())
