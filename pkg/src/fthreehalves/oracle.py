"""Brute-force search over short words in ``l`` and ``r``.

Maps are compared through :meth:`PLMap.key`, an exact byte serialization of
the canonical breakpoint list, so equal keys mean equal elements.

The shortest-word search meets in the middle: the maps of all reduced words
of length up to about half the bound are stored by key, then every reduced
word ``v`` of the remaining length is probed by looking up
``target · v⁻¹``.  A hit ``u`` gives ``u·v = target``.
"""

import multiprocessing as mp

from .plmap import PLMap, compose, generator, identity
from .words import Word, free_reduce

__all__ = ["key", "enumerate_reduced", "reduced_count", "word_maps", "shortest_word", "verify_min_length"]

_STEPS = (("l", 1), ("r", 1), ("l", -1), ("r", -1))


def key(f: PLMap) -> bytes:
    return f.key()


def reduced_count(maxlen: int) -> int:
    """Number of freely reduced words of length at most ``maxlen``."""
    return 1 + sum(4 * 3 ** (k - 1) for k in range(1, maxlen + 1))


def _extend(letters):
    last = letters[-1] if letters else None
    for g, e in _STEPS:
        if last != (g, -e):
            yield letters + ((g, e),)


def enumerate_reduced(maxlen: int):
    """Every freely reduced word of length ``<= maxlen`` once, shortest first."""
    if maxlen < 0:
        raise ValueError("maxlen must be non-negative")
    level = [()]
    for k in range(maxlen + 1):
        for letters in level:
            yield Word(letters)
        if k < maxlen:
            level = [w for letters in level for w in _extend(letters)]


def _gens():
    return {(g, e): generator(g) if e == 1 else generator(g).inverse() for g, e in _STEPS}


def word_maps(maxlen, *, prepend=False):
    """Yield ``(letters, map)`` for reduced words up to ``maxlen``, built incrementally.

    With ``prepend`` the yielded map is that of the *inverse* word, which is
    what the probing side of the search needs.
    """
    gens = _gens()
    level = [((), identity())]
    for k in range(maxlen + 1):
        for item in level:
            yield item
        if k == maxlen:
            break
        nxt = []
        for letters, f in level:
            last = letters[-1] if letters else None
            for g, e in _STEPS:
                if last == (g, -e):
                    continue
                step = gens[(g, e)]
                # inverse of (w·a) is a⁻¹·w⁻¹
                nxt.append((letters + ((g, e),), compose(step.inverse(), f) if prepend else compose(f, step)))
        level = nxt


def _store(maxlen):
    table = {}
    for letters, f in word_maps(maxlen):
        table.setdefault(f.key(), letters)
    return table


_SHARED = {}


def _probe_chunk(args):
    lo, hi, probe_len = args
    table, target = _SHARED["table"], _SHARED["target"]
    best = None
    for i, (letters, vinv) in enumerate(word_maps(probe_len, prepend=True)):
        if i < lo:
            continue
        if i >= hi:
            break
        u = table.get(compose(target, vinv).key())
        if u is not None and (best is None or len(u) + len(letters) < len(best)):
            best = u + letters
    return best


def shortest_word(target: PLMap, bound: int, workers: int = 1):
    """A shortest word of length ``<= bound`` evaluating to ``target``, or ``None``.

    Words of length up to ``ceil(bound/2)`` are stored and words up to
    ``floor(bound/2)`` are probed; ``workers > 1`` splits the probing among
    forked processes.
    """
    if bound < 0:
        raise ValueError("bound must be non-negative")
    store_len, probe_len = (bound + 1) // 2, bound // 2
    table = _store(store_len)
    if workers <= 1:
        _SHARED.update(table=table, target=target)
        try:
            best = _probe_chunk((0, reduced_count(probe_len), probe_len))
        finally:
            _SHARED.clear()
    else:
        total = reduced_count(probe_len)
        cuts = [total * i // workers for i in range(workers + 1)]
        _SHARED.update(table=table, target=target)
        try:
            with mp.get_context("fork").Pool(workers) as pool:
                found = pool.map(_probe_chunk, [(cuts[i], cuts[i + 1], probe_len) for i in range(workers)])
        finally:
            _SHARED.clear()
        found = [w for w in found if w is not None]
        best = min(found, key=len) if found else None
    if best is None:
        return None
    return free_reduce(Word(best))


def verify_min_length(target: PLMap, strictly_below: int, workers: int = 1) -> bool:
    """True iff no word shorter than ``strictly_below`` evaluates to ``target``."""
    if strictly_below <= 0:
        return True
    return shortest_word(target, strictly_below - 1, workers) is None
