"""Confounder batches: object spans deranged across the batch so the
discriminator learns to reject mismatched tuples."""

from .batching import replace_object, replace_subject


def _sattolo(n, rng):
    # Sattolo's algorithm yields a uniformly random cyclic permutation,
    # which is always fixed-point free.
    idx = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.randrange(i)
        idx[i], idx[j] = idx[j], idx[i]
    return idx


def confounder_shuffle(batch, rng, shuffle_subjects=False):
    """Apply a fixed-point-free permutation to the object spans (and
    optionally, independently, the subject spans).

    Returns (confounded records, skipped flag). Batches of size < 2 have no
    derangement and are returned unchanged with skipped=True.
    """
    if len(batch) < 2:
        return list(batch), True
    perm = _sattolo(len(batch), rng)
    objects = [batch[p].span_tokens(batch[p].object_span) for p in perm]
    out = [replace_object(rec, obj) for rec, obj in zip(batch, objects)]
    if shuffle_subjects:
        perm = _sattolo(len(batch), rng)
        subjects = [batch[p].span_tokens(batch[p].subject_span) for p in perm]
        out = [replace_subject(rec, s) for rec, s in zip(out, subjects)]
    return out, False
