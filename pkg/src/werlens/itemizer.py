"""Discretize features into attribute=bin items and build the transactional view.

Continuous attributes are cut into rank-based bins (terciles by default) so
skewed features still produce mineable supports; boundary ties fall into the
lower bin.  Categorical attributes pass through unchanged.  The fitted cuts
serialize to JSON so two models can be analysed over identical subgroup
definitions.
"""

from __future__ import annotations

import json
import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .features import CATEGORICAL_ATTRIBUTES, NUMERIC_ATTRIBUTES, FeatureVector

logger = logging.getLogger(__name__)

TERCILE_LABELS = ("low", "medium", "high")
_BIN_RANK = {label: rank for rank, label in enumerate(TERCILE_LABELS)}
_CATEGORICAL_RANK = 99


def bin_labels(n_levels: int) -> tuple[str, ...]:
    if n_levels == 2:
        return ("low", "high")
    if n_levels == 3:
        return TERCILE_LABELS
    return tuple(f"q{i + 1:02d}" for i in range(n_levels))


@dataclass(frozen=True)
class Item:
    """One attribute=bin predicate."""

    attribute: str
    bin: str

    def __post_init__(self) -> None:
        for part in (self.attribute, self.bin):
            if not part or "=" in part or ";" in part:
                raise ValueError(f"invalid item part {part!r}: must be non-empty without '=' or ';'")

    @property
    def sort_key(self) -> tuple[str, int, str]:
        return (self.attribute, _BIN_RANK.get(self.bin, _CATEGORICAL_RANK), self.bin)

    def __lt__(self, other: "Item") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return f"{self.attribute}={self.bin}"

    @classmethod
    def parse(cls, text: str) -> "Item":
        attribute, sep, bin_label = text.partition("=")
        if not sep:
            raise ValueError(f"cannot parse item {text!r}: expected 'attribute=bin'")
        return cls(attribute=attribute, bin=bin_label)


def encode_items(items: Iterable[Item]) -> str:
    return ";".join(str(i) for i in sorted(items))


def parse_items(text: str) -> tuple[Item, ...]:
    return tuple(sorted(Item.parse(part) for part in text.split(";") if part))


@dataclass(frozen=True)
class Transaction:
    """One record as an itemset plus its outcome (wer_pct for one model)."""

    record_id: str
    items: tuple[Item, ...]
    outcome: float


@dataclass(frozen=True)
class AttributeBins:
    """Binning rule for one attribute: rank cuts, categorical, or dropped."""

    kind: str  # "cuts" | "categorical" | "dropped"
    cuts: tuple[float, ...] = ()

    def label_for(self, value: float) -> str:
        labels = bin_labels(len(self.cuts) + 1)
        return labels[bisect_left(self.cuts, value)]


@dataclass(frozen=True)
class BinningSpec:
    """Per-attribute binning rules, reproducible across runs and models."""

    bins: dict[str, AttributeBins] = field(default_factory=dict)

    def mined_attributes(self) -> list[str]:
        return sorted(a for a, b in self.bins.items() if b.kind != "dropped")

    def to_json(self) -> str:
        out: dict[str, dict] = {}
        for attr in sorted(self.bins):
            rule = self.bins[attr]
            if rule.kind == "categorical":
                out[attr] = {"categorical": True}
            elif rule.kind == "dropped":
                out[attr] = {"dropped": True}
            elif len(rule.cuts) == 2:
                out[attr] = {"c1": rule.cuts[0], "c2": rule.cuts[1]}
            else:
                out[attr] = {"cuts": list(rule.cuts)}
        return json.dumps(out, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "BinningSpec":
        raw = json.loads(text)
        bins: dict[str, AttributeBins] = {}
        for attr, rule in raw.items():
            if rule.get("categorical"):
                bins[attr] = AttributeBins("categorical")
            elif rule.get("dropped"):
                bins[attr] = AttributeBins("dropped")
            elif "cuts" in rule:
                bins[attr] = AttributeBins("cuts", tuple(float(c) for c in rule["cuts"]))
            else:
                bins[attr] = AttributeBins("cuts", (float(rule["c1"]), float(rule["c2"])))
        return cls(bins=bins)


def fit_bins(
    numeric_columns: Mapping[str, Sequence[float]],
    categorical: Iterable[str] = CATEGORICAL_ATTRIBUTES,
    n_bins: int = 3,
) -> BinningSpec:
    """Fit rank-based cuts per numeric attribute; constant columns are dropped.

    Cut i is the ceil(n*i/k)-th smallest value, so with all-distinct values
    every bin holds between floor(n/k) and ceil(n/k) records.  Values equal
    to a cut go to the lower bin.
    """
    if n_bins < 2:
        raise ValueError("n_bins must be at least 2")
    bins: dict[str, AttributeBins] = {}
    for attr, values in numeric_columns.items():
        ordered = sorted(float(v) for v in values)
        n = len(ordered)
        if n == 0:
            raise ValueError(f"attribute {attr!r} has no values")
        if ordered[0] == ordered[-1]:
            bins[attr] = AttributeBins("dropped")
            continue
        cuts = tuple(ordered[(n * i + n_bins - 1) // n_bins - 1] for i in range(1, n_bins))
        bins[attr] = AttributeBins("cuts", cuts)
    for attr in categorical:
        bins[attr] = AttributeBins("categorical")
    return BinningSpec(bins=bins)


def apply_bins(
    features: Mapping[str, FeatureVector],
    spec: BinningSpec,
    wer: Mapping[str, float],
) -> list[Transaction]:
    """Join features with per-record WER and emit one transaction per record.

    Records missing a WER value (or features) are excluded with a warning
    count; output is ordered by record id.
    """
    known = set(NUMERIC_ATTRIBUTES) | set(CATEGORICAL_ATTRIBUTES)
    unknown = [a for a in spec.bins if a not in known]
    if unknown:
        raise ValueError(f"unknown attribute(s) in binning spec: {', '.join(sorted(unknown))}")

    shared = sorted(set(features) & set(wer))
    if not shared:
        raise ValueError("no overlapping records between features and WER tables")
    excluded = len(features) - len(shared)
    if excluded:
        logger.warning("%d record(s) excluded: no WER value for this model", excluded)

    transactions: list[Transaction] = []
    for rid in shared:
        fv = features[rid]
        items: list[Item] = []
        for attr in spec.mined_attributes():
            rule = spec.bins[attr]
            value = getattr(fv, attr)
            if rule.kind == "categorical":
                items.append(Item(attr, str(value)))
            else:
                items.append(Item(attr, rule.label_for(float(value))))
        transactions.append(Transaction(rid, tuple(sorted(items)), float(wer[rid])))
    return transactions
