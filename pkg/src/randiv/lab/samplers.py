"""Random test words: uniform reduced words and words built from long axis segments."""
from __future__ import annotations

import numpy as np

from ..groups import GroupSpec, Word, multiply, normal_form, power


def random_reduced_word(rng: np.random.Generator, spec: GroupSpec, length: int) -> Word:
    """Normal form of a uniformly random letter sequence of the given length."""
    letters = spec.letters
    idx = rng.integers(0, len(letters), size=length)
    return normal_form([letters[i] for i in idx], spec)


def axis_mixture_word(rng: np.random.Generator, g0: Word, spec: GroupSpec, max_len: int,
                      max_power: int = 6, max_junk: int = 3) -> Word:
    """Alternate random powers of ``g0`` with short random words, capped at ``max_len``.

    Uniform words rarely travel along a g0 axis for long, so they would leave
    the large-projection lemmas vacuous; these words do so often.
    """
    w: Word = ()
    while True:
        k = int(rng.integers(-max_power, max_power + 1))
        junk = random_reduced_word(rng, spec, int(rng.integers(1, max_junk + 1)))
        nxt = multiply(multiply(w, power(g0, k, spec), spec), junk, spec)
        if len(nxt) > max_len:
            return w
        w = nxt
