"""Clean-room corpus BLEU-4 and ROUGE-1/2/L/Lsum, plus discriminator
classification accuracy. Scores are on the 0-100 scale.

Tokenization is the package tokenizer with special symbols left out and no
stemming; numbers here compare conditions within this artifact, not against
library-produced scores.
"""

import math
from collections import Counter
from dataclasses import asdict, dataclass

from .errors import ValidationError
from .gan.loop import score_assertion
from .neural.vocab import split_text

BLEU_MAX_ORDER = 4


@dataclass
class EvalReport:
    bleu: float
    rouge1: float
    rouge2: float
    rougeL: float
    rougeLsum: float
    n: int
    disc_accuracy: float | None = None

    def to_dict(self):
        return asdict(self)


def _tokens(text):
    return split_text(text)


def _ngrams(tokens, n):
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def bleu(preds, refs):
    """Corpus BLEU-4 with brevity penalty; add-one smoothing on orders > 1."""
    if len(preds) != len(refs):
        raise ValidationError("preds/refs length mismatch")
    if not preds:
        raise ValidationError("empty corpus")
    matches = [0] * BLEU_MAX_ORDER
    totals = [0] * BLEU_MAX_ORDER
    pred_len = ref_len = 0
    for pred, ref in zip(preds, refs):
        p_toks, r_toks = _tokens(pred), _tokens(ref)
        pred_len += len(p_toks)
        ref_len += len(r_toks)
        for n in range(1, BLEU_MAX_ORDER + 1):
            p_ngrams = _ngrams(p_toks, n)
            r_ngrams = _ngrams(r_toks, n)
            matches[n - 1] += sum(
                min(c, r_ngrams.get(gram, 0)) for gram, c in p_ngrams.items()
            )
            totals[n - 1] += max(0, len(p_toks) - n + 1)
    precisions = []
    for n in range(1, BLEU_MAX_ORDER + 1):
        m, t = matches[n - 1], totals[n - 1]
        if n > 1:
            m, t = m + 1, t + 1
        precisions.append(m / t if t > 0 else 0.0)
    if precisions[0] == 0.0:
        return 0.0
    log_mean = sum(math.log(p) for p in precisions) / BLEU_MAX_ORDER
    bp = 1.0 if pred_len > ref_len else (
        math.exp(1.0 - ref_len / pred_len) if pred_len > 0 else 0.0
    )
    return 100.0 * bp * math.exp(log_mean)


def _f1(overlap, pred_total, ref_total):
    if pred_total == 0 or ref_total == 0:
        return 0.0
    p = overlap / pred_total
    r = overlap / ref_total
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def _ngram_f1(p_toks, r_toks, n):
    p_ngrams, r_ngrams = _ngrams(p_toks, n), _ngrams(r_toks, n)
    overlap = sum(min(c, r_ngrams.get(g, 0)) for g, c in p_ngrams.items())
    return _f1(overlap, sum(p_ngrams.values()), sum(r_ngrams.values()))


def _lcs_length(a, b):
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, 1):
            cur.append(prev[j - 1] + 1 if x == y else max(prev[j], cur[-1]))
        prev = cur
    return prev[-1]


def _lcs_f1(p_toks, r_toks):
    return _f1(_lcs_length(p_toks, r_toks), len(p_toks), len(r_toks))


def _union_lcs_f1(pred, ref):
    """Summary-level LCS over newline-split sentences (union LCS hits)."""
    pred_sents = [_tokens(s) for s in pred.split("\n") if s.strip()]
    ref_sents = [_tokens(s) for s in ref.split("\n") if s.strip()]
    if not pred_sents or not ref_sents:
        return 0.0
    hits = 0
    for r in ref_sents:
        union = set()
        for p in pred_sents:
            union |= _lcs_token_positions(r, p)
        hits += len(union)
    pred_total = sum(len(p) for p in pred_sents)
    ref_total = sum(len(r) for r in ref_sents)
    return _f1(hits, pred_total, ref_total)


def _lcs_token_positions(ref, pred):
    """Positions in ref participating in an LCS with pred (for union LCS)."""
    m, n = len(ref), len(pred)
    table = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            if ref[i - 1] == pred[j - 1]:
                table[i][j] = table[i - 1][j - 1] + 1
            else:
                table[i][j] = max(table[i - 1][j], table[i][j - 1])
    positions = set()
    i, j = m, n
    while i > 0 and j > 0:
        if ref[i - 1] == pred[j - 1]:
            positions.add(i - 1)
            i, j = i - 1, j - 1
        elif table[i - 1][j] >= table[i][j - 1]:
            i -= 1
        else:
            j -= 1
    return positions


def rouge(preds, refs):
    """Mean F1 ROUGE-1/2, ROUGE-L (sequence LCS), ROUGE-Lsum (summary LCS).

    Returns (r1, r2, rL, rLsum) on the 0-100 scale.
    """
    if len(preds) != len(refs):
        raise ValidationError("preds/refs length mismatch")
    if not preds:
        raise ValidationError("empty corpus")
    r1 = r2 = rl = rlsum = 0.0
    for pred, ref in zip(preds, refs):
        p_toks, r_toks = _tokens(pred), _tokens(ref)
        r1 += _ngram_f1(p_toks, r_toks, 1)
        r2 += _ngram_f1(p_toks, r_toks, 2)
        rl += _lcs_f1(p_toks, r_toks)
        rlsum += _union_lcs_f1(pred, ref)
    n = len(preds)
    return (100 * r1 / n, 100 * r2 / n, 100 * rl / n, 100 * rlsum / n)


def disc_accuracy(d, vocab, aligned_test, threshold=0.5):
    """Fraction of (story, sentence, assertion, gold) rows where the
    thresholded discriminator label matches gold."""
    if not aligned_test:
        raise ValidationError("empty test set")
    hits = 0
    for story_text, sentence, assertion_text, gold in aligned_test:
        _, label = score_assertion(
            d, vocab, story_text, sentence, assertion_text, threshold
        )
        hits += label == bool(gold)
    return hits / len(aligned_test)


def evaluate(preds, refs, d=None, vocab=None, aligned_test=None, threshold=0.5):
    r1, r2, rl, rlsum = rouge(preds, refs)
    acc = None
    if d is not None and aligned_test:
        acc = disc_accuracy(d, vocab, aligned_test, threshold)
    return EvalReport(
        bleu=bleu(preds, refs),
        rouge1=r1,
        rouge2=r2,
        rougeL=rl,
        rougeLsum=rlsum,
        n=len(preds),
        disc_accuracy=acc,
    )
