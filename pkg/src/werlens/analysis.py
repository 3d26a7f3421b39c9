"""Statistical core: divergence, Welch's t, Shapley attribution, model comparison.

Divergence is a subgroup's mean per-record WER minus the population mean, in
percentage points.  Welch's t gauges how significant that difference is; by
default the second sample is the whole population, with the complement as a
selectable alternative.  Shapley values split an itemset's divergence fairly
across its items by exact enumeration of all subsets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .itemizer import Item, Transaction
from .miner import Subgroup, item_masks

MAX_SHAPLEY_ITEMS = 10

DeltaFn = Callable[[tuple[Item, ...]], float]


@dataclass(frozen=True)
class DatasetStats:
    """Population statistics over all per-record WERs under one model."""

    n: int
    wer_mean: float
    wer_var: float  # sample variance, n-1 divisor
    wer_pooled: float | None = None  # corpus-level 100*edits/ref_words, when known

    @classmethod
    def from_values(cls, values: Sequence[float], wer_pooled: float | None = None) -> "DatasetStats":
        arr = np.asarray(values, dtype=np.float64)
        if len(arr) == 0:
            raise ValueError("dataset stats need at least one record")
        var = float(arr.var(ddof=1)) if len(arr) > 1 else 0.0
        return cls(n=len(arr), wer_mean=float(arr.mean()), wer_var=var, wer_pooled=wer_pooled)

    @classmethod
    def from_transactions(
        cls, transactions: Sequence[Transaction], wer_pooled: float | None = None
    ) -> "DatasetStats":
        return cls.from_values([tx.outcome for tx in transactions], wer_pooled=wer_pooled)


@dataclass(frozen=True)
class DivergenceRow:
    subgroup: Subgroup
    delta: float
    t: float


@dataclass(frozen=True)
class DivergenceSummary:
    overall_wer_mean: float
    overall_wer_pooled: float | None
    delta_min: float
    delta_max: float
    delta_avg: float
    delta_std: float
    n_subgroups: int


@dataclass(frozen=True)
class ShapleyRow:
    """Divergence share of one item, local to an itemset or aggregated globally."""

    item: Item
    value: float
    itemset: tuple[Item, ...] | None = None  # None for global rows
    n_itemsets: int = 1


@dataclass(frozen=True)
class ComparisonRow:
    """Per-subgroup WER gap between two models; negative means model 2 is better."""

    items: tuple[Item, ...]
    f_m1: float
    f_m2: float
    gap: float
    t: float


def welch_t(mean1: float, var1: float, n1: int, mean2: float, var2: float, n2: int) -> float:
    """Absolute Welch statistic; 0 for equal means, +inf when only the means differ."""
    num = abs(mean1 - mean2)
    if num == 0.0:
        return 0.0
    denom = math.sqrt(var1 / n1 + var2 / n2)
    if denom == 0.0:
        return math.inf
    return num / denom


def divergence(
    subgroup: Subgroup, dataset: DatasetStats, against: str = "population"
) -> DivergenceRow:
    """Delta (subgroup mean minus population mean) with its Welch statistic.

    ``against="population"`` tests the subgroup sample against all records;
    ``"complement"`` tests against the records outside the subgroup, derived
    from sums so no transaction access is needed.
    """
    delta = subgroup.wer_mean - dataset.wer_mean
    if against == "population":
        t = welch_t(
            subgroup.wer_mean, subgroup.wer_var, subgroup.n,
            dataset.wer_mean, dataset.wer_var, dataset.n,
        )
    elif against == "complement":
        n_c = dataset.n - subgroup.n
        if n_c < 1:
            t = 0.0 if delta == 0.0 else math.inf
        else:
            mean_c = (dataset.n * dataset.wer_mean - subgroup.n * subgroup.wer_mean) / n_c
            sumsq_d = dataset.wer_var * (dataset.n - 1) + dataset.n * dataset.wer_mean**2
            sumsq_i = subgroup.wer_var * (subgroup.n - 1) + subgroup.n * subgroup.wer_mean**2
            var_c = ((sumsq_d - sumsq_i) - n_c * mean_c**2) / (n_c - 1) if n_c > 1 else 0.0
            t = welch_t(subgroup.wer_mean, subgroup.wer_var, subgroup.n, mean_c, max(var_c, 0.0), n_c)
    else:
        raise ValueError(f"unknown t-test target {against!r}")
    return DivergenceRow(subgroup=subgroup, delta=delta, t=t)


def summarize(rows: Sequence[DivergenceRow], dataset: DatasetStats) -> DivergenceSummary:
    """Spread, extremes and mean of the subgroup divergences."""
    if not rows:
        raise ValueError("cannot summarize zero divergence rows")
    deltas = np.array([r.delta for r in rows], dtype=np.float64)
    std = float(deltas.std(ddof=1)) if len(deltas) > 1 else 0.0
    return DivergenceSummary(
        overall_wer_mean=dataset.wer_mean,
        overall_wer_pooled=dataset.wer_pooled,
        delta_min=float(deltas.min()),
        delta_max=float(deltas.max()),
        delta_avg=float(deltas.mean()),
        delta_std=std,
        n_subgroups=len(rows),
    )


def make_delta_fn(transactions: Sequence[Transaction], dataset: DatasetStats) -> DeltaFn:
    """Exact memoized divergence of any itemset, computed from transactions.

    delta(empty) is 0 by definition; any other itemset's delta is the mean
    outcome of its matching records minus the population mean.
    """
    masks = item_masks(transactions)
    outcomes = np.array([tx.outcome for tx in transactions], dtype=np.float64)
    cache: dict[tuple[Item, ...], float] = {(): 0.0}

    def delta_fn(items: tuple[Item, ...]) -> float:
        key = tuple(sorted(items))
        cached = cache.get(key)
        if cached is not None:
            return cached
        mask = np.ones(len(transactions), dtype=bool)
        for item in key:
            item_mask = masks.get(item)
            if item_mask is None:
                raise ValueError(f"item {item} matches no records")
            mask &= item_mask
        n = int(mask.sum())
        if n == 0:
            raise ValueError(f"itemset {key} matches no records (support 0)")
        value = float(outcomes[mask].mean()) - dataset.wer_mean
        cache[key] = value
        return value

    return delta_fn


def shapley_local(items: Sequence[Item], delta_fn: DeltaFn) -> list[ShapleyRow]:
    """Exact Shapley split of delta(itemset) across its items.

    Enumerates all 2^k subsets, so k is capped at MAX_SHAPLEY_ITEMS.  The
    values satisfy efficiency: they sum to delta(itemset).
    """
    itemset = tuple(sorted(items))
    k = len(itemset)
    if k == 0:
        raise ValueError("empty itemset")
    if k > MAX_SHAPLEY_ITEMS:
        raise ValueError(f"itemset of {k} items exceeds exact-enumeration cap {MAX_SHAPLEY_ITEMS}")

    deltas = [0.0] * (1 << k)
    for mask in range(1, 1 << k):
        subset = tuple(itemset[i] for i in range(k) if mask >> i & 1)
        deltas[mask] = delta_fn(subset)

    fact = [math.factorial(i) for i in range(k + 1)]
    rows: list[ShapleyRow] = []
    for a in range(k):
        bit = 1 << a
        phi = 0.0
        for mask in range(1 << k):
            if mask & bit:
                continue
            size = mask.bit_count()
            weight = fact[size] * fact[k - size - 1] / fact[k]
            phi += weight * (deltas[mask | bit] - deltas[mask])
        rows.append(ShapleyRow(item=itemset[a], value=phi, itemset=itemset))
    return rows


def shapley_global(subgroups: Sequence[Subgroup], delta_fn: DeltaFn) -> list[ShapleyRow]:
    """Mean local Shapley value of each item over the itemsets containing it.

    Items never appearing in a frequent itemset are omitted; output is sorted
    by value descending (bar-chart order), ties broken by item order.
    """
    if not subgroups:
        raise ValueError("no subgroups to aggregate")
    totals: dict[Item, float] = {}
    counts: dict[Item, int] = {}
    for sg in subgroups:
        for row in shapley_local(sg.items, delta_fn):
            totals[row.item] = totals.get(row.item, 0.0) + row.value
            counts[row.item] = counts.get(row.item, 0) + 1
    rows = [
        ShapleyRow(item=item, value=totals[item] / counts[item], n_itemsets=counts[item])
        for item in totals
    ]
    rows.sort(key=lambda r: (-r.value, r.item.sort_key))
    return rows


def compare_models(
    transactions_m1: Sequence[Transaction],
    transactions_m2: Sequence[Transaction],
    subgroups: Sequence[Subgroup],
) -> list[ComparisonRow]:
    """Per-subgroup WER gap (model 2 minus model 1) with a Welch statistic.

    Both transaction sets must cover the same records with identical items,
    so the subgroup definitions line up record for record.
    """
    ids1 = [tx.record_id for tx in transactions_m1]
    ids2 = [tx.record_id for tx in transactions_m2]
    if ids1 != ids2:
        raise ValueError("record-id mismatch between the two models' transaction sets")
    for tx1, tx2 in zip(transactions_m1, transactions_m2):
        if tx1.items != tx2.items:
            raise ValueError(f"item mismatch for record {tx1.record_id!r}")

    masks = item_masks(transactions_m1)
    w1 = np.array([tx.outcome for tx in transactions_m1], dtype=np.float64)
    w2 = np.array([tx.outcome for tx in transactions_m2], dtype=np.float64)

    rows: list[ComparisonRow] = []
    for sg in subgroups:
        mask = np.ones(len(w1), dtype=bool)
        for item in sg.items:
            mask &= masks[item]
        n = int(mask.sum())
        if n == 0:
            raise ValueError(f"subgroup {sg.items} matches no records")
        a, b = w1[mask], w2[mask]
        var_a = float(a.var(ddof=1)) if n > 1 else 0.0
        var_b = float(b.var(ddof=1)) if n > 1 else 0.0
        f1, f2 = float(a.mean()), float(b.mean())
        rows.append(
            ComparisonRow(
                items=sg.items,
                f_m1=f1,
                f_m2=f2,
                gap=f2 - f1,
                t=welch_t(f1, var_a, n, f2, var_b, n),
            )
        )
    return rows


def gain_histogram(
    rows: Sequence[ComparisonRow], n_bins: int = 20
) -> list[tuple[float, float, int, str]]:
    """Equal-width histogram of the gaps, labelled by sign for two-color plots.

    Returns (bin_lo, bin_hi, count, sign) tuples whose counts sum to the row
    count; a degenerate range collapses to a single bin.
    """
    if not rows:
        raise ValueError("no comparison rows to histogram")
    if n_bins < 1:
        raise ValueError("n_bins must be at least 1")
    gaps = np.array([r.gap for r in rows], dtype=np.float64)
    lo, hi = float(gaps.min()), float(gaps.max())
    if lo == hi:
        return [(lo, hi, len(gaps), "neg" if hi < 0 else "pos")]
    counts, edges = np.histogram(gaps, bins=n_bins, range=(lo, hi))
    out = []
    for i, count in enumerate(counts):
        b_lo, b_hi = float(edges[i]), float(edges[i + 1])
        out.append((b_lo, b_hi, int(count), _sign_label(b_lo, b_hi, i == n_bins - 1)))
    return out


def _sign_label(lo: float, hi: float, is_last: bool) -> str:
    # The final bin is closed on the right, so hi == 0 there still contains 0.
    if hi < 0 or (hi == 0 and not is_last):
        return "neg"
    if lo >= 0:
        return "pos"
    return "mixed"


def pooled_wer(edit_ref_pairs: Sequence[tuple[int, int]]) -> float:
    """Corpus-level (micro) WER: 100 * total edits / total reference words."""
    pairs = list(edit_ref_pairs)
    n_ref = sum(n for _, n in pairs)
    if n_ref == 0:
        raise ValueError("pooled WER needs at least one reference word")
    return 100.0 * sum(e for e, _ in pairs) / n_ref
