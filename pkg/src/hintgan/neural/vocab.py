"""Shared word-level vocabulary and tokenizer.

Structural symbols (part markers, sentence tokens, relation tokens) are
matched greedily as single tokens; everything else is whitespace/punctuation
word splitting. The generator and discriminator share one Vocabulary
verbatim.
"""

import hashlib
import json
import re
from collections import Counter

from ..errors import ValidationError

PAD, BOS, EOS, UNK, MASK = "<pad>", "<s>", "</s>", "<unk>", "<mask>"
CORE_SPECIALS = (PAD, BOS, EOS, UNK, MASK)

STRUCTURAL_SYMBOLS = (
    "<|subj|>",
    "<|rel|>",
    "<|obj|>",
    "<|specific|>",
    "<|general|>",
    "<|target|>",
    "<|sep|>",
    "<specific>",
    "<general>",
    "<subject>",
    "<relation>",
    "<object>",
)

_TOKEN_RE = re.compile(
    r"<\|[^>\s]+\|>"          # <|...|> symbols
    r"|</?[a-z]+>"            # <pad>, <subject>, </s>, ...
    r"|[A-Za-z0-9_]+(?:'[A-Za-z0-9_]+)*"
    r"|[^\sA-Za-z0-9_]"
)

_NO_SPACE_BEFORE = frozenset(".,!?;:)*")
_NO_SPACE_AFTER = frozenset("(*")


def split_text(text):
    return _TOKEN_RE.findall(text)


def join_tokens(tokens):
    out = []
    prev = None
    for tok in tokens:
        if out and not (tok in _NO_SPACE_BEFORE or prev in _NO_SPACE_AFTER):
            out.append(" ")
        out.append(tok)
        prev = tok
    return "".join(out)


class Vocabulary:
    def __init__(self, tokens):
        self.tokens = list(tokens)
        self.index = {t: i for i, t in enumerate(self.tokens)}
        if len(self.index) != len(self.tokens):
            raise ValidationError("duplicate tokens in vocabulary")
        for s in CORE_SPECIALS:
            if s not in self.index:
                raise ValidationError(f"vocabulary missing special {s}")

    @classmethod
    def build(cls, texts, min_freq=2, extra_symbols=(), max_sentences=10):
        counts = Counter()
        for t in texts:
            counts.update(split_text(t))
        sent_tokens = [f"<|sent{k}|>" for k in range(1, max_sentences + 1)]
        tokens = list(CORE_SPECIALS) + list(STRUCTURAL_SYMBOLS) + sent_tokens
        for sym in extra_symbols:
            if sym not in tokens:
                tokens.append(sym)
        seen = set(tokens)
        for tok, n in sorted(counts.items()):
            if n >= min_freq and tok not in seen:
                tokens.append(tok)
                seen.add(tok)
        return cls(tokens)

    def __len__(self):
        return len(self.tokens)

    @property
    def pad_id(self):
        return self.index[PAD]

    @property
    def bos_id(self):
        return self.index[BOS]

    @property
    def eos_id(self):
        return self.index[EOS]

    @property
    def unk_id(self):
        return self.index[UNK]

    def encode(self, text):
        unk = self.unk_id
        return [self.index.get(tok, unk) for tok in split_text(text)]

    def decode(self, ids, skip_special=False):
        toks = [self.tokens[i] for i in ids]
        if skip_special:
            toks = [t for t in toks if t not in CORE_SPECIALS]
        return join_tokens(toks)

    def content_hash(self):
        payload = json.dumps(self.tokens, ensure_ascii=False).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]

    def save(self, path):
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.tokens, fh, ensure_ascii=False)

    @classmethod
    def load(cls, path):
        with open(path, encoding="utf-8") as fh:
            return cls(json.load(fh))
