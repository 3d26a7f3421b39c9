"""Shared test utilities: independent oracles and signal builders.

The oracles here deliberately take a different route from the library code:
edit distance by plain recursion instead of a DP table with backtrace, and
frequent itemsets by exhaustive subset enumeration instead of mask-based
search, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import math
from itertools import combinations

import numpy as np

from werlens.corpus import AudioBuffer
from werlens.features import FeatureVector
from werlens.itemizer import Item, Transaction


def brute_distance(a, b) -> int:
    """Levenshtein distance by the textbook first-element recursion."""
    memo: dict[tuple[int, int], int] = {}

    def rec(i: int, j: int) -> int:
        key = (i, j)
        if key in memo:
            return memo[key]
        if i == len(a):
            result = len(b) - j
        elif j == len(b):
            result = len(a) - i
        elif a[i] == b[j]:
            result = rec(i + 1, j + 1)
        else:
            result = 1 + min(rec(i + 1, j), rec(i, j + 1), rec(i + 1, j + 1))
        memo[key] = result
        return result

    return rec(0, 0)


def enumerate_frequent(
    transactions: list[Transaction],
    min_support: float,
    max_len: int | None = None,
    min_group: int = 2,
) -> dict[tuple[Item, ...], tuple[float, int, float]]:
    """All frequent itemsets by exhaustive enumeration of item subsets.

    Returns {itemset: (support, n, outcome_mean)} under the same frequency
    definition the miner documents (support threshold plus n >= min_group).
    """
    universe = sorted({item for tx in transactions for item in tx.items})
    total = len(transactions)
    threshold = max(math.ceil(min_support * total - 1e-9), min_group)
    tx_sets = [(frozenset(tx.items), tx.outcome) for tx in transactions]
    out: dict[tuple[Item, ...], tuple[float, int, float]] = {}
    top = len(universe) if max_len is None else min(max_len, len(universe))
    for k in range(1, top + 1):
        for combo in combinations(universe, k):
            needed = frozenset(combo)
            matched = [outcome for items, outcome in tx_sets if needed <= items]
            if len(matched) >= threshold:
                out[tuple(combo)] = (len(matched) / total, len(matched), sum(matched) / len(matched))
    return out


def sine(freq: float = 440.0, dur: float = 1.0, sr: int = 16000, amp: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(dur * sr))) / sr
    return amp * np.sin(2.0 * np.pi * freq * t)


def audio(samples: np.ndarray, sr: int = 16000) -> AudioBuffer:
    return AudioBuffer(samples=np.asarray(samples, dtype=np.float64), sample_rate=sr)


def make_fv(**overrides) -> FeatureVector:
    base = dict(
        snr=15.0,
        spectral_flatness=0.4,
        tot_dur=3.0,
        trim_dur=2.5,
        n_pauses=1,
        n_words=6,
        speak_rate=2.0,
        speak_rate_trim=2.4,
        speaker="FD1",
    )
    base.update(overrides)
    return FeatureVector(**base)


def make_transactions(
    rng: np.random.Generator,
    n_transactions: int,
    n_attributes: int = 4,
    n_bins: int = 3,
    outcome_scale: float = 100.0,
) -> list[Transaction]:
    """Random one-item-per-attribute transactions with random outcomes."""
    labels = ("low", "medium", "high", "top")[:n_bins]
    rows = []
    for i in range(n_transactions):
        items = tuple(
            sorted(
                Item(f"a{a}", labels[int(rng.integers(n_bins))]) for a in range(n_attributes)
            )
        )
        rows.append(Transaction(f"t{i:04d}", items, float(rng.uniform(0, outcome_scale))))
    return rows
