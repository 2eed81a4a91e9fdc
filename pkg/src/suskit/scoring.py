"""SUS questionnaire scoring, study aggregation, and feasible-mean counts."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .distributions import sample_skewness

__all__ = [
    "TEN_ITEM_MULTIPLIER",
    "NINE_ITEM_MULTIPLIER",
    "ResponseSheet",
    "Study",
    "FeasibleMeanCounts",
    "item_score",
    "sus_score",
    "study_summary",
    "feasible_mean_counts",
    "enumerate_feasible_means",
]

TEN_ITEM_MULTIPLIER = 2.5
# Nine-item studies rescale by 100/36 ~ 2.78; the conventional rounded
# multiplier makes the maximum score 100.08, reported as-is unless the
# caller opts into clamping.
NINE_ITEM_MULTIPLIER = 2.78

MAX_FEASIBLE_MEAN_N = 1000


class SheetValidationError(ValueError):
    """A response sheet failed validation; carries the offending item if known."""

    def __init__(self, message: str, item: int | None = None):
        super().__init__(message)
        self.item = item


@dataclass(frozen=True)
class ResponseSheet:
    """One respondent's Likert answers.

    ``omitted_item`` is None for the standard 10-item questionnaire, or the
    1..10 index of the dropped question for the 9-item variant (answers then
    hold the remaining items in questionnaire order).
    """

    answers: tuple[int, ...]
    omitted_item: int | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "answers", tuple(int(a) for a in self.answers))
        if self.omitted_item is None:
            if len(self.answers) != 10:
                raise SheetValidationError(
                    f"ten-item sheet needs exactly 10 answers, got {len(self.answers)}"
                )
        else:
            if not 1 <= self.omitted_item <= 10:
                raise SheetValidationError(
                    f"omitted item index must be in 1..10, got {self.omitted_item}"
                )
            if len(self.answers) != 9:
                raise SheetValidationError(
                    f"nine-item sheet needs exactly 9 answers, got {len(self.answers)}"
                )
        for item, answer in zip(self.item_indices(), self.answers):
            if not 1 <= answer <= 5:
                raise SheetValidationError(
                    f"item {item}: response {answer} outside 1..5", item=item
                )

    def item_indices(self) -> tuple[int, ...]:
        """Questionnaire item numbers corresponding to the stored answers."""
        if self.omitted_item is None:
            return tuple(range(1, 11))
        return tuple(i for i in range(1, 11) if i != self.omitted_item)


def item_score(item_index: int, response: int) -> int:
    """Contribution of a single answer: response-1 for odd items, 5-response for even."""
    if not 1 <= item_index <= 10:
        raise SheetValidationError(f"item index must be in 1..10, got {item_index}")
    if not 1 <= response <= 5:
        raise SheetValidationError(
            f"item {item_index}: response {response} outside 1..5", item=item_index
        )
    return response - 1 if item_index % 2 == 1 else 5 - response


def sus_score(sheet: ResponseSheet, clamp: bool = False) -> float:
    """SUS score of one sheet.

    Ten-item sheets score on the usual [0, 100] grid in 2.5 steps. Nine-item
    sheets use the 2.78 multiplier, whose maximum is 100.08; pass
    ``clamp=True`` to cap the result at 100.
    """
    raw = sum(item_score(i, a) for i, a in zip(sheet.item_indices(), sheet.answers))
    if sheet.omitted_item is None:
        return TEN_ITEM_MULTIPLIER * raw
    value = NINE_ITEM_MULTIPLIER * raw
    return min(value, 100.0) if clamp else value


@dataclass(frozen=True)
class Study:
    """SUS scores for one study plus summary statistics.

    sd uses the n-1 denominator and is None for n < 2; skewness is None for
    n < 3 or zero-variance data, with the reason recorded in ``flags``.
    """

    scores: tuple[float, ...]
    n: int
    mean: float
    sd: float | None
    skewness: float | None
    flags: tuple[str, ...] = field(default=())


def study_summary(scores) -> Study:
    """Aggregate a list of SUS scores into a Study record."""
    xs = np.asarray(list(scores), dtype=float)
    if xs.size == 0:
        raise ValueError("a study needs at least one score")
    if not np.all(np.isfinite(xs)):
        raise ValueError("scores must be finite")
    n = int(xs.size)
    mean = float(xs.mean())
    flags: list[str] = []
    sd: float | None = None
    skewness: float | None = None
    if n >= 2:
        sd = float(xs.std(ddof=1))
    else:
        flags.append("sd undefined for a single respondent")
    if n >= 3 and sd is not None and sd > 0:
        skewness = sample_skewness(xs)
    elif n >= 3:
        flags.append("skewness undefined for zero-variance scores")
    else:
        flags.append("skewness undefined for fewer than 3 respondents")
    return Study(tuple(float(x) for x in xs), n, mean, sd, skewness, tuple(flags))


class FeasibleMeanCounts(NamedTuple):
    combinations: int
    distinct_means: int


def feasible_mean_counts(n: int) -> FeasibleMeanCounts:
    """Number of score multisets and distinct mean values for n ten-item sheets.

    Scores live on a 41-value arithmetic grid, so means of n respondents form
    a sumset with exactly 41n - (n-1) distinct values, while the number of
    score combinations is C(n+40, 40). Both are exact integers.
    """
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    return FeasibleMeanCounts(math.comb(n + 40, 40), 41 * n - (n - 1))


def enumerate_feasible_means(n: int) -> np.ndarray:
    """All achievable mean SUS scores for n respondents, sorted ascending."""
    if not 1 <= n <= MAX_FEASIBLE_MEAN_N:
        raise ValueError(f"n must be in 1..{MAX_FEASIBLE_MEAN_N}, got {n}")
    return 2.5 * np.arange(40 * n + 1) / n
