"""Words in a free group.

A word is a tuple of nonzero ints; ``k`` is the k-th generator and ``-k``
its inverse.
"""

from __future__ import annotations

from typing import Iterable

Word = tuple[int, ...]

_ALPHABET = "abcdefghijklmnopqrstuvwxyz"


def free_reduce(word: Iterable[int]) -> Word:
    out: list[int] = []
    for x in word:
        if x == 0:
            raise ValueError("0 is not a generator letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(word: Iterable[int]) -> Word:
    return tuple(-x for x in reversed(tuple(word)))


def multiply(*words: Iterable[int]) -> Word:
    out: list[int] = []
    for w in words:
        out.extend(w)
    return free_reduce(out)


def cyclic_reduce(word: Iterable[int]) -> Word:
    w = free_reduce(word)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def cyclic_canonical(word: Word) -> Word:
    """Least rotation of ``word`` or its inverse; identifies equivalent relators."""
    w = cyclic_reduce(word)
    if not w:
        return w
    best = None
    for cand in (w, inverse(w)):
        for k in range(len(cand)):
            rot = cand[k:] + cand[:k]
            if best is None or rot < best:
                best = rot
    return best


def shortlex_key(word: Word):
    return (len(word), tuple((abs(x), x < 0) for x in word))


def exponent_sums(word: Iterable[int]) -> dict[int, int]:
    sums: dict[int, int] = {}
    for x in word:
        sums[abs(x)] = sums.get(abs(x), 0) + (1 if x > 0 else -1)
    return {g: e for g, e in sums.items() if e}


def format_word(word: Word) -> str:
    """``(1, 2, -1)`` renders as ``a b a^-1``; generators past 26 render ``g27``."""
    if not word:
        return "1"
    parts = []
    for x in word:
        g = abs(x)
        name = _ALPHABET[g - 1] if g <= len(_ALPHABET) else f"g{g}"
        parts.append(name if x > 0 else f"{name}^-1")
    return " ".join(parts)


def parse_word(text: str) -> Word:
    """Inverse of :func:`format_word`; ``A`` is also accepted for ``a^-1``."""
    text = text.strip()
    if text in ("", "1"):
        return ()
    out = []
    for tok in text.split():
        neg = tok.endswith("^-1")
        if neg:
            tok = tok[:-3]
        if tok.startswith("g") and tok[1:].isdigit():
            g = int(tok[1:])
        elif len(tok) == 1 and tok.lower() in _ALPHABET:
            if tok.isupper():
                neg = not neg
            g = _ALPHABET.index(tok.lower()) + 1
        else:
            raise ValueError(f"bad generator token {tok!r}")
        out.append(-g if neg else g)
    return tuple(out)
