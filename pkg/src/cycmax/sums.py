"""Cyclic sums: per-index window radii, equal-radius sums, the
maximal-average sum, and subset-collection generalizations.

The basic object is S(x, r) = sum_i x_i / mean(x_{i+1}, ..., x_{i+r_i}),
the sum over one period with each term normalized by the average of the
next r_i entries.  Taking the infimum over radii turns each denominator
into the largest forward window average, giving the maximal-average sum;
replacing forward windows by arbitrary subset collections gives the
generalized sum, whose infimum collapses to 1 whenever some collection
contains the corresponding singleton.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import CycmaxError, InadmissiblePair
from .periodic import (
    FLOAT,
    IndexInterval,
    Number,
    PeriodicTuple,
    interval_average,
    right_maximal_profile,
)


@dataclass(frozen=True)
class RadiusTuple:
    """Per-index window lengths r_1..r_n, each at least 1."""

    radii: tuple[int, ...]

    def __post_init__(self):
        if not self.radii:
            raise ValueError("radii must be nonempty")
        if any((not isinstance(r, int)) or r < 1 for r in self.radii):
            raise ValueError("radii must be positive integers")

    @classmethod
    def constant(cls, n: int, k: int) -> "RadiusTuple":
        return cls(tuple([k] * n))

    def rotated(self, start: int) -> "RadiusTuple":
        n = len(self.radii)
        return RadiusTuple(tuple(self.radii[(start - 1 + j) % n] for j in range(n)))

    def __len__(self) -> int:
        return len(self.radii)


class SubsetCollectionSystem:
    """For each index i in 1..n, a nonempty list of nonempty subsets of 1..n.

    Subsets are canonicalized to sorted tuples; for n <= 64 a bitmask per
    subset backs validation and deduplication.
    """

    def __init__(self, collections: Sequence[Sequence[Sequence[int]]]):
        if not collections:
            raise ValueError("system must cover at least one index")
        self.n = len(collections)
        canon: list[tuple[tuple[int, ...], ...]] = []
        for i, subsets in enumerate(collections, start=1):
            if not subsets:
                raise ValueError(f"collection at index {i} is empty")
            seen_masks = set()
            cleaned = []
            for subset in subsets:
                idx = tuple(sorted(set(int(j) for j in subset)))
                if not idx:
                    raise ValueError(f"empty subset in collection {i}")
                if idx[0] < 1 or idx[-1] > self.n:
                    raise ValueError(
                        f"subset {idx} at index {i} leaves the range 1..{self.n}"
                    )
                if self.n <= 64:
                    mask = 0
                    for j in idx:
                        mask |= 1 << (j - 1)
                    if mask in seen_masks:
                        continue
                    seen_masks.add(mask)
                elif idx in cleaned:
                    continue
                cleaned.append(idx)
            canon.append(tuple(cleaned))
        self.collections = tuple(canon)

    @classmethod
    def right_windows(cls, n: int) -> "SubsetCollectionSystem":
        """The system whose i-th collection holds the windows starting at i.

        Windows [i : i+r-1] mod n for r = 1..n; the full window is the
        whole index set.  With this system the generalized sum uses the
        right maximal value at i itself (no forward shift).
        """
        collections = []
        for i in range(1, n + 1):
            subsets = []
            for r in range(1, n + 1):
                subsets.append([(i - 1 + j) % n + 1 for j in range(r)])
            collections.append(subsets)
        return cls(collections)

    def max_subset_average(self, x: PeriodicTuple, i: int) -> Number:
        best = None
        for idx in self.collections[i - 1]:
            s = sum((x.values[j - 1] for j in idx), start=Fraction(0) if x.backend != FLOAT else 0.0)
            avg = s / len(idx)
            if best is None or avg > best:
                best = avg
        return best


def sum_with_radii(x: PeriodicTuple, r: RadiusTuple) -> Number:
    """S(x, r) = sum_i x_i / mean of the r_i entries after i."""
    if len(r) != x.n:
        raise ValueError("radii length must match tuple length")
    total = Fraction(0) if x.backend != FLOAT else 0.0
    for i in range(1, x.n + 1):
        denom = interval_average(x, IndexInterval(i + 1, i + r.radii[i - 1]))
        if denom == 0:
            raise InadmissiblePair(
                f"window of length {r.radii[i - 1]} after index {i} sums to zero"
            )
        total += x.values[i - 1] / denom
    return total


def diananda_sum(x: PeriodicTuple, k: int) -> Number:
    """sum_i x_i / (x_{i+1} + ... + x_{i+k}), the equal-radius sum over k."""
    if k < 1:
        raise ValueError("k must be a positive integer")
    return sum_with_radii(x, RadiusTuple.constant(x.n, k)) / k


@dataclass(frozen=True)
class MaxSumResult:
    """Value of the maximal-average sum and the componentwise argmax radii."""

    value: Number
    radii: RadiusTuple


def max_avg_sum(x: PeriodicTuple) -> MaxSumResult:
    """sum_i x_i / m_i where m_i is the largest forward window average at i.

    m_i equals the right maximal value at i+1, so the argmax radius at i
    is the length of the irreducible maximal interval at i+1 (smallest
    maximizing window).  The returned radii satisfy
    sum_with_radii(x, radii) == value.
    """
    values, lengths = right_maximal_profile(x)
    total = Fraction(0) if x.backend != FLOAT else 0.0
    radii = []
    for i in range(1, x.n + 1):
        j = i % x.n  # 0-based position of index i+1
        m = values[j]
        radii.append(lengths[j])
        total += x.values[i - 1] / m
    return MaxSumResult(value=total, radii=RadiusTuple(tuple(radii)))


def generalized_max_sum(x: PeriodicTuple, system: SubsetCollectionSystem) -> Number:
    """sum_i x_i / (largest subset average in the i-th collection)."""
    if system.n != x.n:
        raise ValueError("system size must match tuple length")
    total = Fraction(0) if x.backend != FLOAT else 0.0
    for i in range(1, x.n + 1):
        m = system.max_subset_average(x, i)
        if m == 0:
            raise InadmissiblePair(f"all subset averages at index {i} are zero")
        total += x.values[i - 1] / m
    return total


def radii_from_json(text: str) -> RadiusTuple:
    """Parse {"radii": [int, ...]}."""
    try:
        doc = json.loads(text)
        radii = doc["radii"]
        return RadiusTuple(tuple(int(r) for r in radii))
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise CycmaxError(f"malformed radii JSON: {exc}") from exc


def system_from_json(text: str) -> SubsetCollectionSystem:
    """Parse {"collections": [[[int, ...], ...], ...]} with 1-based indices."""
    try:
        doc = json.loads(text)
        return SubsetCollectionSystem(doc["collections"])
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
        raise CycmaxError(f"malformed subset-system JSON: {exc}") from exc
