"""Text normalization and word error rate from a minimum edit-cost alignment."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

# ASCII punctuation removed before tokenization.
_PUNCTUATION = ".,;:!?\"'()[]-"
_STRIP_TABLE = str.maketrans("", "", _PUNCTUATION)


class UndefinedWerError(ValueError):
    """WER is undefined for an empty reference."""


@dataclass(frozen=True)
class WerBreakdown:
    """Edit counts from one reference/hypothesis alignment."""

    substitutions: int
    deletions: int
    insertions: int
    n_ref: int

    @property
    def errors(self) -> int:
        return self.substitutions + self.deletions + self.insertions

    @property
    def wer_pct(self) -> float:
        return 100.0 * self.errors / self.n_ref


def normalize(text: str) -> list[str]:
    """Lowercase, strip ASCII punctuation, and split into tokens.

    Whitespace runs collapse and empty tokens are dropped, so the result is
    stable under case and spacing differences.
    """
    return text.lower().translate(_STRIP_TABLE).split()


def _cost_table(reference: Sequence[str], hypothesis: Sequence[str]) -> list[list[int]]:
    n, m = len(reference), len(hypothesis)
    dp = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = i
    for j in range(1, m + 1):
        dp[0][j] = j
    for i in range(1, n + 1):
        ref_word = reference[i - 1]
        row = dp[i]
        prev = dp[i - 1]
        for j in range(1, m + 1):
            sub = prev[j - 1] + (ref_word != hypothesis[j - 1])
            row[j] = min(sub, row[j - 1] + 1, prev[j] + 1)
    return dp


def edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Word-level Levenshtein distance with unit costs."""
    return _cost_table(a, b)[len(a)][len(b)]


def wer(reference: Sequence[str], hypothesis: Sequence[str]) -> WerBreakdown:
    """Align token sequences at minimum edit cost and return the breakdown.

    Ties during backtrace prefer substitution over insertion over deletion,
    so the (S, D, I) split is deterministic.  Raises UndefinedWerError when
    the reference is empty; callers must exclude such records explicitly.
    """
    n, m = len(reference), len(hypothesis)
    if n == 0:
        raise UndefinedWerError("WER is undefined for an empty reference")
    dp = _cost_table(reference, hypothesis)

    subs = dels = ins = 0
    i, j = n, m
    while i > 0 or j > 0:
        if i > 0 and j > 0:
            mismatch = reference[i - 1] != hypothesis[j - 1]
            if dp[i][j] == dp[i - 1][j - 1] + mismatch:
                subs += mismatch
                i -= 1
                j -= 1
                continue
        if j > 0 and dp[i][j] == dp[i][j - 1] + 1:
            ins += 1
            j -= 1
        else:
            dels += 1
            i -= 1
    return WerBreakdown(substitutions=subs, deletions=dels, insertions=ins, n_ref=n)
