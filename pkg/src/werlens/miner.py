"""Frequent-itemset mining over feature transactions with exact outcome stats.

The search is a depth-first intersection of per-item record masks (vertical
layout).  Completeness above the support threshold is contractual and tested
against exhaustive subset enumeration; anti-monotone pruning only skips
itemsets that cannot be frequent.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .itemizer import Item, Transaction

DEFAULT_MIN_SUPPORT = 0.05
# Welch's t needs a variance, so groups of a single record are noise by definition.
MIN_GROUP_SIZE = 2


@dataclass(frozen=True)
class Subgroup:
    """A frequent itemset with its matching-record outcome statistics."""

    items: tuple[Item, ...]
    support: float
    n: int
    wer_mean: float
    wer_var: float

    @property
    def sort_key(self) -> tuple:
        return (len(self.items), tuple(i.sort_key for i in self.items))


def item_masks(transactions: Sequence[Transaction]) -> dict[Item, np.ndarray]:
    """Boolean record-membership mask per distinct item."""
    masks: dict[Item, np.ndarray] = {}
    for row, tx in enumerate(transactions):
        seen_attrs = set()
        for item in tx.items:
            if item.attribute in seen_attrs:
                raise ValueError(
                    f"transaction {tx.record_id!r} has two items for {item.attribute!r}"
                )
            seen_attrs.add(item.attribute)
            masks.setdefault(item, np.zeros(len(transactions), dtype=bool))[row] = True
    return masks


def mine(
    transactions: Sequence[Transaction],
    min_support: float = DEFAULT_MIN_SUPPORT,
    max_len: int | None = None,
    min_group: int = MIN_GROUP_SIZE,
) -> list[Subgroup]:
    """Enumerate every itemset with support >= min_support (and n >= min_group).

    Returns exact supports, means, and sample variances (n-1 divisor), sorted
    by (length, canonical item order).
    """
    if not 0.0 < min_support <= 1.0:
        raise ValueError(f"min_support {min_support} outside (0, 1]")
    if not transactions:
        raise ValueError("cannot mine an empty transaction set")
    if max_len is not None and max_len < 1:
        raise ValueError("max_len must be at least 1")

    total = len(transactions)
    outcomes = np.array([tx.outcome for tx in transactions], dtype=np.float64)
    min_count = max(math.ceil(min_support * total - 1e-9), min_group)

    masks = item_masks(transactions)
    candidates = [
        (item, mask) for item, mask in sorted(masks.items(), key=lambda kv: kv[0].sort_key)
        if int(mask.sum()) >= min_count
    ]

    results: list[Subgroup] = []

    def make_subgroup(items: tuple[Item, ...], mask: np.ndarray, n: int) -> Subgroup:
        values = outcomes[mask]
        var = float(values.var(ddof=1)) if n > 1 else 0.0
        return Subgroup(
            items=items, support=n / total, n=n, wer_mean=float(values.mean()), wer_var=var
        )

    def extend(prefix: tuple[Item, ...], prefix_mask: np.ndarray, start: int) -> None:
        for idx in range(start, len(candidates)):
            item, mask = candidates[idx]
            if prefix and item.attribute == prefix[-1].attribute:
                continue  # one item per attribute; same-attribute pairs never co-occur
            merged = prefix_mask & mask
            n = int(merged.sum())
            if n < min_count:
                continue
            itemset = prefix + (item,)
            results.append(make_subgroup(itemset, merged, n))
            if max_len is None or len(itemset) < max_len:
                extend(itemset, merged, idx + 1)

    extend((), np.ones(total, dtype=bool), 0)
    results.sort(key=lambda s: s.sort_key)
    return results


def subgroup_lookup(subgroups: Iterable[Subgroup], items: Iterable[Item]) -> Subgroup | None:
    """Find the mined subgroup matching an itemset, or None if not frequent.

    Contradictory itemsets (two bins of one attribute) simply have support 0
    and come back as not-found; an empty itemset is malformed.
    """
    key = tuple(sorted(set(items)))
    if not key:
        raise ValueError("empty itemset")
    for sg in subgroups:
        if sg.items == key:
            return sg
    return None
