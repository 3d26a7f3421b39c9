import math

import numpy as np
import pytest
from scipy import stats as scipy_stats

from helpers import make_transactions
from werlens.analysis import (
    ComparisonRow,
    DatasetStats,
    compare_models,
    divergence,
    gain_histogram,
    make_delta_fn,
    pooled_wer,
    shapley_global,
    shapley_local,
    summarize,
    welch_t,
)
from werlens.itemizer import Item, Transaction
from werlens.miner import Subgroup, mine

X = Item("attr", "x")
Y = Item("battr", "y")
Z = Item("cattr", "z")


def _subgroup(items=(X,), n=3, mean=0.0, var=1.0, support=0.5):
    return Subgroup(items=tuple(sorted(items)), support=support, n=n, wer_mean=mean, wer_var=var)


def test_divergence_paper_cross_check():
    dataset = DatasetStats(n=100, wer_mean=80.000, wer_var=25.0)
    row = divergence(_subgroup(n=10, mean=82.985, var=20.0), dataset)
    assert abs(row.delta - 2.985) < 1e-9
    assert f"{row.delta:.6f}" == "2.985000"


def test_divergence_whole_dataset_is_zero():
    dataset = DatasetStats(n=8, wer_mean=50.0, wer_var=10.0)
    row = divergence(_subgroup(n=8, mean=50.0, var=10.0, support=1.0), dataset)
    assert row.delta == 0.0
    assert row.t == 0.0


def test_divergence_three_vs_six_welch():
    values = [1.0, 2.0, 3.0, 10.0, 11.0, 12.0]
    dataset = DatasetStats.from_values(values)
    assert dataset.wer_var == pytest.approx(25.1)
    sub = _subgroup(n=3, mean=2.0, var=1.0)
    row = divergence(sub, dataset)
    assert row.delta == pytest.approx(-4.5)
    assert row.t == pytest.approx(2.117, abs=1e-3)
    # Independent oracle: scipy's unequal-variance two-sample statistic.
    oracle = scipy_stats.ttest_ind([1.0, 2.0, 3.0], values, equal_var=False).statistic
    assert row.t == pytest.approx(abs(oracle), abs=1e-12)


def test_divergence_infinite_t_marker():
    dataset = DatasetStats(n=10, wer_mean=50.0, wer_var=0.0)
    row = divergence(_subgroup(n=5, mean=60.0, var=0.0), dataset)
    assert math.isinf(row.t)


def test_divergence_complement_mode():
    values = [1.0, 2.0, 3.0, 10.0, 11.0, 12.0]
    dataset = DatasetStats.from_values(values)
    sub = _subgroup(n=3, mean=2.0, var=1.0)
    row = divergence(sub, dataset, against="complement")
    oracle = scipy_stats.ttest_ind([1.0, 2.0, 3.0], [10.0, 11.0, 12.0], equal_var=False).statistic
    assert row.t == pytest.approx(abs(oracle), abs=1e-12)
    assert row.delta == pytest.approx(-4.5)  # delta stays population-relative
    with pytest.raises(ValueError):
        divergence(sub, dataset, against="self")


def test_welch_t_constant_shift_invariance():
    rng = np.random.default_rng(3)
    a = rng.uniform(0, 100, size=12)
    b = rng.uniform(0, 100, size=30)

    def t_of(x, y):
        return welch_t(x.mean(), x.var(ddof=1), len(x), y.mean(), y.var(ddof=1), len(y))

    base = t_of(a, b)
    shifted = t_of(a + 17.5, b + 17.5)
    assert shifted == pytest.approx(base, rel=1e-9)
    assert t_of(a, b) == pytest.approx(t_of(b, a), rel=1e-12)  # |t| swap invariance


def test_summarize_examples():
    dataset = DatasetStats(n=10, wer_mean=50.0, wer_var=4.0, wer_pooled=48.0)
    rows = [
        divergence(_subgroup(items=(X,), n=3, mean=49.0), dataset),
        divergence(_subgroup(items=(Y,), n=3, mean=50.0), dataset),
        divergence(_subgroup(items=(Z,), n=3, mean=51.0), dataset),
    ]
    summary = summarize(rows, dataset)
    assert summary.delta_min == -1.0
    assert summary.delta_max == 1.0
    assert summary.delta_avg == 0.0
    assert summary.delta_std == pytest.approx(1.0)  # sample std of {-1, 0, 1}
    assert summary.delta_min <= summary.delta_avg <= summary.delta_max
    assert summary.overall_wer_mean == 50.0
    assert summary.overall_wer_pooled == 48.0

    single = summarize(rows[:1], dataset)
    assert single.delta_min == single.delta_max == single.delta_avg == -1.0
    assert single.delta_std == 0.0
    with pytest.raises(ValueError):
        summarize([], dataset)


def _delta_from_dict(values):
    table = {tuple(sorted(k)): v for k, v in values.items()}
    table[()] = 0.0

    def fn(items):
        return table[tuple(sorted(items))]

    return fn


def test_shapley_singleton_collapses_to_delta():
    fn = _delta_from_dict({(X,): 2.5})
    rows = shapley_local((X,), fn)
    assert len(rows) == 1
    assert rows[0].value == 2.5


def test_shapley_pair_derived_example():
    fn = _delta_from_dict({(X,): 2.0, (Y,): -1.0, (X, Y): 4.0})
    rows = {r.item: r.value for r in shapley_local((X, Y), fn)}
    assert rows[X] == 3.5
    assert rows[Y] == 0.5
    assert rows[X] + rows[Y] == 4.0


def test_shapley_symmetry():
    # X and Y are interchangeable in every coalition, so they split equally.
    def fn(items):
        k = tuple(sorted(items))
        score = 3.0 * sum(1 for i in k if i in (X, Y))
        return score + (1.5 if Z in k else 0.0)

    rows = {r.item: r.value for r in shapley_local((X, Y, Z), fn)}
    assert rows[X] == pytest.approx(rows[Y], abs=1e-12)


def test_shapley_efficiency_on_mined_corpus():
    rng = np.random.default_rng(500)
    transactions = make_transactions(rng, 500, n_attributes=5)
    dataset = DatasetStats.from_transactions(transactions)
    subgroups = mine(transactions, min_support=0.05, max_len=3)
    assert subgroups
    delta_fn = make_delta_fn(transactions, dataset)
    for sg in subgroups:
        rows = shapley_local(sg.items, delta_fn)
        assert abs(sum(r.value for r in rows) - delta_fn(sg.items)) <= 1e-9


def test_shapley_local_limits():
    fn = _delta_from_dict({})
    with pytest.raises(ValueError):
        shapley_local((), fn)
    too_many = tuple(Item(f"a{i:02d}", "x") for i in range(11))
    with pytest.raises(ValueError, match="exceeds"):
        shapley_local(too_many, fn)


def test_shapley_global_aggregation():
    fn = _delta_from_dict({(X,): 1.0, (Y,): 0.5, (X, Y): 6.0})
    subgroups = [
        _subgroup(items=(X,), n=5, mean=1.0),
        _subgroup(items=(X, Y), n=4, mean=6.0),
    ]
    rows = shapley_global(subgroups, fn)
    by_item = {r.item: r for r in rows}
    # phi_X in {X} is 1.0; in {X, Y} it is 0.5*1 + 0.5*(6 - 0.5) = 3.25.
    assert by_item[X].value == pytest.approx((1.0 + 3.25) / 2)
    assert by_item[X].n_itemsets == 2
    assert by_item[Y].n_itemsets == 1
    assert rows == sorted(rows, key=lambda r: (-r.value, r.item.sort_key))


def test_shapley_global_item_only_in_singleton():
    fn = _delta_from_dict({(X,): 1.75})
    rows = shapley_global([_subgroup(items=(X,), n=5, mean=1.75)], fn)
    assert rows[0].item == X
    assert rows[0].value == 1.75


def test_make_delta_fn_matches_direct_computation():
    rng = np.random.default_rng(77)
    transactions = make_transactions(rng, 200, n_attributes=4)
    dataset = DatasetStats.from_transactions(transactions)
    delta_fn = make_delta_fn(transactions, dataset)
    assert delta_fn(()) == 0.0
    subgroups = mine(transactions, min_support=0.1, max_len=2)
    for sg in subgroups:
        wanted = set(sg.items)
        matched = [tx.outcome for tx in transactions if wanted <= set(tx.items)]
        expected = sum(matched) / len(matched) - dataset.wer_mean
        assert delta_fn(sg.items) == pytest.approx(expected, abs=1e-9)
        assert abs(sg.wer_mean - dataset.wer_mean - delta_fn(sg.items)) <= 1e-9
    with pytest.raises(ValueError):
        delta_fn((Item("nosuch", "bin"),))


# ---------------------------------------------------------------------------
# Model comparison


def _paired_transactions(outcome_pairs):
    """Two aligned transaction lists; every record carries item X."""
    tx1, tx2 = [], []
    for i, (w1, w2) in enumerate(outcome_pairs):
        rid = f"r{i:03d}"
        tx1.append(Transaction(rid, (X,), float(w1)))
        tx2.append(Transaction(rid, (X,), float(w2)))
    return tx1, tx2


def test_compare_models_gap_sign_convention_paper_rows():
    # Means are exact: each subgroup sample is {f-1, f+1}.
    cases = [(76.94, 84.34, 7.40), (82.12, 80.51, -1.61), (76.94, 48.86, -28.08)]
    for f1, f2, expected_gap in cases:
        tx1, tx2 = _paired_transactions([(f1 - 1.0, f2 - 1.0), (f1 + 1.0, f2 + 1.0)])
        subgroups = mine(tx1, min_support=0.5)
        (row,) = compare_models(tx1, tx2, subgroups)
        assert row.f_m1 == pytest.approx(f1, abs=1e-12)
        assert row.f_m2 == pytest.approx(f2, abs=1e-12)
        assert row.gap == pytest.approx(expected_gap, abs=1e-9)
        assert row.gap == row.f_m2 - row.f_m1
    # The large-model row rounds to the paper's -28.09 within printed precision.
    assert abs(-28.08 - (-28.09)) <= 0.01 + 1e-12


def test_compare_models_identical_outcomes():
    tx1, tx2 = _paired_transactions([(10.0, 10.0), (30.0, 30.0), (50.0, 50.0)])
    subgroups = mine(tx1, min_support=0.5)
    rows = compare_models(tx1, tx2, subgroups)
    assert all(r.gap == 0.0 and r.t == 0.0 for r in rows)


def test_compare_models_gap_antisymmetry():
    rng = np.random.default_rng(31)
    transactions = make_transactions(rng, 100, n_attributes=3)
    other = [
        Transaction(tx.record_id, tx.items, float(rng.uniform(0, 100))) for tx in transactions
    ]
    subgroups = mine(transactions, min_support=0.1, max_len=2)
    forward = compare_models(transactions, other, subgroups)
    backward = compare_models(other, transactions, subgroups)
    for fwd, bwd in zip(forward, backward):
        assert fwd.gap == pytest.approx(-bwd.gap, abs=1e-12)
        assert fwd.t == pytest.approx(bwd.t, abs=1e-12)


def test_compare_models_id_mismatch_errors():
    tx1, tx2 = _paired_transactions([(1.0, 2.0), (3.0, 4.0)])
    with pytest.raises(ValueError, match="mismatch"):
        compare_models(tx1, list(reversed(tx2)), mine(tx1, min_support=0.5))


def test_compare_models_welch_against_scipy():
    rng = np.random.default_rng(41)
    pairs = [(rng.uniform(0, 100), rng.uniform(0, 100)) for _ in range(25)]
    tx1, tx2 = _paired_transactions(pairs)
    (row,) = compare_models(tx1, tx2, mine(tx1, min_support=1.0))
    a = [p[0] for p in pairs]
    b = [p[1] for p in pairs]
    oracle = scipy_stats.ttest_ind(a, b, equal_var=False).statistic
    assert row.t == pytest.approx(abs(oracle), abs=1e-12)


def test_gain_histogram_binning():
    rows = [
        ComparisonRow(items=(X,), f_m1=0, f_m2=g, gap=g, t=0.0) for g in (-1.0, -1.0, 2.0)
    ]
    bins = gain_histogram(rows, n_bins=3)
    assert [(lo, hi, c) for lo, hi, c, _ in bins] == [(-1.0, 0.0, 2), (0.0, 1.0, 0), (1.0, 2.0, 1)]
    assert [sign for _, _, _, sign in bins] == ["neg", "pos", "pos"]
    assert sum(c for _, _, c, _ in bins) == len(rows)


def test_gain_histogram_degenerate_range():
    rows = [ComparisonRow(items=(X,), f_m1=0, f_m2=5.0, gap=5.0, t=0.0)] * 4
    bins = gain_histogram(rows, n_bins=20)
    assert bins == [(5.0, 5.0, 4, "pos")]


def test_gain_histogram_counts_sum():
    rng = np.random.default_rng(55)
    rows = [
        ComparisonRow(items=(X,), f_m1=0, f_m2=g, gap=float(g), t=0.0)
        for g in rng.normal(0, 5, size=137)
    ]
    bins = gain_histogram(rows, n_bins=20)
    assert sum(c for _, _, c, _ in bins) == 137


def test_summary_std_shrinks_with_outcome_dispersion():
    rng = np.random.default_rng(60)
    transactions = make_transactions(rng, 300, n_attributes=4)
    dataset = DatasetStats.from_transactions(transactions)
    subgroups = mine(transactions, min_support=0.05, max_len=2)
    rows = [divergence(sg, dataset) for sg in subgroups]
    base_std = summarize(rows, dataset).delta_std

    # Pull every outcome halfway to the mean: all deltas scale by 0.5.
    squeezed = [
        Transaction(tx.record_id, tx.items, dataset.wer_mean + 0.5 * (tx.outcome - dataset.wer_mean))
        for tx in transactions
    ]
    dataset2 = DatasetStats.from_transactions(squeezed)
    subgroups2 = mine(squeezed, min_support=0.05, max_len=2)
    rows2 = [divergence(sg, dataset2) for sg in subgroups2]
    squeezed_std = summarize(rows2, dataset2).delta_std
    assert squeezed_std < base_std
    assert squeezed_std == pytest.approx(0.5 * base_std, rel=1e-9)


def test_pooled_wer():
    assert pooled_wer([(3, 10), (1, 10)]) == pytest.approx(20.0)
    with pytest.raises(ValueError):
        pooled_wer([])
