"""Word enumeration shared by several test modules."""

import itertools

from artifact.klrw_core import p, q, s


def arrows(cfg):
    n = cfg.punctures
    return [p(i) for i in range(1, n + 1)] + [q(i) for i in range(n)] + [s(i) for i in range(n + 1)]


def composable_words(cfg, length):
    """Every composable word of the given length, listed left to right."""
    letters = arrows(cfg)
    out = [(x,) for x in letters]
    for _ in range(length - 1):
        out = [w + (x,) for w in out for x in letters if w[-1].source == x.target]
    return out


def all_words(cfg, max_length):
    return list(itertools.chain.from_iterable(composable_words(cfg, L) for L in range(1, max_length + 1)))
