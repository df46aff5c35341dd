"""Symbolic aggregate approximation used by the optional candidate pre-filter."""

from __future__ import annotations

import numpy as np
from scipy.stats import norm

from .dataset import znormalize


def gaussian_breakpoints(alphabet_size: int) -> np.ndarray:
    """Breakpoints splitting N(0,1) into alphabet_size equiprobable bins."""
    if alphabet_size < 1:
        raise ValueError("alphabet_size must be positive")
    return norm.ppf(np.arange(1, alphabet_size) / alphabet_size)


def paa(values: np.ndarray, word_length: int) -> np.ndarray:
    """Piecewise aggregate approximation: mean of word_length equal frames.

    Frame boundaries follow the usual fractional split so lengths that do
    not divide evenly are still covered end to end.
    """
    v = np.asarray(values, dtype=np.float64)
    n = len(v)
    if word_length >= n:
        return v.copy()
    edges = np.linspace(0, n, word_length + 1)
    out = np.empty(word_length)
    for i in range(word_length):
        lo, hi = int(edges[i]), max(int(edges[i]), int(np.ceil(edges[i + 1])))
        out[i] = v[lo:hi].mean()
    return out


def sax_word(values: np.ndarray, word_length: int, alphabet_size: int) -> tuple[int, ...]:
    """Discretize a subsequence to a SAX word (symbols as small integers)."""
    reduced = paa(znormalize(values), word_length)
    breakpoints = gaussian_breakpoints(alphabet_size)
    return tuple(int(x) for x in np.searchsorted(breakpoints, reduced))
