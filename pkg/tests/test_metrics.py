import math

import pytest

from hintgan.errors import ValidationError
from hintgan.metrics import EvalReport, bleu, disc_accuracy, evaluate, rouge


class TestBleu:
    def test_identical_pairs(self):
        assert bleu(["the cat sat on the mat"], ["the cat sat on the mat"]) == \
            pytest.approx(100.0)

    def test_disjoint_pairs(self):
        assert bleu(["dog"], ["cat"]) == 0.0

    def test_clipped_counts_hand_case(self):
        # pred "the the the cat" vs ref "the cat sat":
        # p1 = 2/4 (clipped "the" to 1), p2 = (1+1)/(3+1), p3 = (0+1)/(2+1),
        # p4 = (0+1)/(1+1); brevity penalty 1 since 4 > 3.
        expected = 100.0 * math.exp(
            (math.log(2 / 4) + math.log(2 / 4) + math.log(1 / 3)
             + math.log(1 / 2)) / 4)
        assert bleu(["the the the cat"], ["the cat sat"]) == \
            pytest.approx(expected, abs=1e-9)

    def test_brevity_penalty(self):
        # pred shorter than ref: all precisions 1 but BP = exp(1 - 4/2)
        got = bleu(["the cat"], ["the cat sat on"])
        # only orders 1-2 have n-grams; orders 3-4 contribute smoothed 1/1
        expected = 100.0 * math.exp(1.0 - 4.0 / 2.0) * math.exp(
            (math.log(1.0) + math.log(2 / 2) + math.log(1 / 1)
             + math.log(1 / 1)) / 4)
        assert got == pytest.approx(expected, abs=1e-9)

    def test_corpus_level_pooling(self):
        # counts pool over the corpus, not averaged per pair
        preds = ["the cat", "a dog"]
        refs = ["the cat", "a dog"]
        assert bleu(preds, refs) == pytest.approx(100.0)

    def test_order_invariance(self):
        preds = ["the cat sat", "a dog ran fast"]
        refs = ["the cat slept", "a dog walked fast"]
        assert bleu(preds, refs) == pytest.approx(
            bleu(list(reversed(preds)), list(reversed(refs))))

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            bleu(["a"], ["a", "b"])

    def test_empty_corpus(self):
        with pytest.raises(ValidationError):
            bleu([], [])


class TestRouge:
    def test_identical_pairs(self):
        r1, r2, rl, rlsum = rouge(["the cat sat"], ["the cat sat"])
        assert (r1, r2, rl, rlsum) == (100.0, 100.0, 100.0, 100.0)

    def test_disjoint_pairs(self):
        assert rouge(["dog"], ["cat"]) == (0.0, 0.0, 0.0, 0.0)

    def test_unigram_f1_hand_case(self):
        # "the cat" vs "the cat sat": P=1, R=2/3, F1=0.8
        r1, _, _, _ = rouge(["the cat"], ["the cat sat"])
        assert r1 == pytest.approx(80.0, abs=1e-9)

    def test_bigram_f1_hand_case(self):
        # bigrams: pred {the cat}, ref {the cat, cat sat}: P=1, R=1/2
        _, r2, _, _ = rouge(["the cat"], ["the cat sat"])
        assert r2 == pytest.approx(100 * 2 * (1 * 0.5) / 1.5, abs=1e-9)

    def test_lcs_hand_case(self):
        # "the cat ran" vs "the dog ran": LCS = 2, P = R = 2/3
        _, _, rl, _ = rouge(["the cat ran"], ["the dog ran"])
        assert rl == pytest.approx(100 * 2 / 3, abs=1e-9)

    def test_single_sentence_lsum_equals_l(self):
        _, _, rl, rlsum = rouge(["the cat ran home"], ["the cat sat home"])
        assert rl == pytest.approx(rlsum, abs=1e-9)

    def test_multi_sentence_lsum(self):
        pred = "the cat sat\nthe dog ran"
        ref = "the cat sat\nthe dog ran"
        _, _, _, rlsum = rouge([pred], [ref])
        assert rlsum == pytest.approx(100.0)

    def test_mean_over_pairs(self):
        r1_both, *_ = rouge(["the cat", "x"], ["the cat sat", "y"])
        assert r1_both == pytest.approx(40.0, abs=1e-9)  # (80 + 0) / 2

    def test_permutation_invariance(self):
        preds = ["the cat", "a dog ran"]
        refs = ["the cat sat", "a dog walked"]
        assert rouge(preds, refs) == rouge(list(reversed(preds)),
                                           list(reversed(refs)))

    def test_appending_perfect_pair_never_lowers_mean(self):
        preds, refs = ["the cat"], ["the cat sat"]
        base = rouge(preds, refs)
        extended = rouge(preds + ["same text"], refs + ["same text"])
        assert all(e >= b for e, b in zip(extended, base))

    def test_length_mismatch(self):
        with pytest.raises(ValidationError):
            rouge(["a"], [])


class _ConstantScorer:
    """Discriminator stand-in returning a fixed score."""

    def __init__(self, score):
        self.score = score

    def __call__(self, input_ids=None):
        import torch
        return torch.tensor(self.score)


class _Vocab:
    def encode(self, text):
        return [1, 2, 3]


class TestDiscAccuracy:
    def test_oracle_upper_bound(self):
        rows = [("s", "t", "a", True)] * 5
        assert disc_accuracy(_ConstantScorer(0.9), _Vocab(), rows) == 1.0

    def test_always_wrong(self):
        rows = [("s", "t", "a", True)] * 5
        assert disc_accuracy(_ConstantScorer(0.1), _Vocab(), rows) == 0.0

    def test_empty_rejected(self):
        with pytest.raises(ValidationError):
            disc_accuracy(_ConstantScorer(0.5), _Vocab(), [])


class TestEvaluate:
    def test_report_fields(self):
        report = evaluate(["the cat"], ["the cat sat"])
        assert isinstance(report, EvalReport)
        assert report.n == 1
        assert report.disc_accuracy is None
        d = report.to_dict()
        assert set(d) == {"bleu", "rouge1", "rouge2", "rougeL", "rougeLsum",
                          "n", "disc_accuracy"}
        assert 0 <= d["bleu"] <= 100
