"""Irreducible maximal intervals, their inclusion order, and the rotation
that majorizes the constant profile.

For each left end i there is a unique shortest window [i : i+kappa(i)]
whose average attains the right maximal value at i; kappa maps into
[0 : n-1] and is n-periodic.  The n classes of these windows modulo
shifts by n, ordered by set inclusion of representatives, form the
interval poset.  When all short-window averages are pairwise distinct
(the generic case) the Hasse diagram is a tree whose root is the unique
full-length class, whose average equals the period mean.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import DegenerateOrder
from .periodic import (
    IndexInterval,
    Number,
    PeriodicTuple,
    interval_average,
    right_maximal_length,
    right_maximal_profile,
)


@dataclass(frozen=True)
class MIntervalRecord:
    """Irreducible maximal interval with left end ``start`` in 1..n."""

    start: int
    kappa: int
    average: Number

    @property
    def interval(self) -> IndexInterval:
        return IndexInterval(self.start, self.start + self.kappa)

    @property
    def cardinality(self) -> int:
        return self.kappa + 1


@dataclass
class IntervalPoset:
    """The n interval classes ordered by inclusion.

    ``parent[i]`` is the start index of the smallest class strictly
    containing class i, or None for a maximal element.  ``root`` is the
    start of the full-length class when one exists (it always does for
    inputs with pairwise distinct short-window averages).
    """

    n: int
    nodes: dict[int, MIntervalRecord]
    parent: dict[int, Optional[int]]
    root: Optional[int]

    def children(self, start: int) -> list[int]:
        return sorted(i for i, p in self.parent.items() if p == start)

    def minimal_elements(self) -> list[int]:
        have_child = set(p for p in self.parent.values() if p is not None)
        return sorted(i for i in self.nodes if i not in have_child)

    def chain_to_root(self, start: int) -> list[int]:
        chain = [start]
        while self.parent[chain[-1]] is not None:
            chain.append(self.parent[chain[-1]])
        return chain

    def is_tree(self) -> bool:
        return self.root is not None and sum(
            1 for p in self.parent.values() if p is None
        ) == 1

    def to_json(self) -> str:
        nodes = [
            {
                "start": rec.start,
                "kappa": rec.kappa,
                "average": float(rec.average),
            }
            for rec in (self.nodes[i] for i in sorted(self.nodes))
        ]
        edges = [
            [child, parent]
            for child, parent in sorted(self.parent.items())
            if parent is not None
        ]
        return json.dumps({"nodes": nodes, "edges": edges, "root": self.root})

    def to_dot(self) -> str:
        lines = ["digraph interval_poset {", "  rankdir=BT;"]
        for i in sorted(self.nodes):
            rec = self.nodes[i]
            label = f"[{rec.start}:{rec.start + rec.kappa}] a={float(rec.average):.6g}"
            shape = ' shape=doubleoctagon' if i == self.root else ""
            lines.append(f'  n{i} [label="{label}"{shape}];')
        for child, parent in sorted(self.parent.items()):
            if parent is not None:
                lines.append(f"  n{child} -> n{parent};")
        lines.append("}")
        return "\n".join(lines)


def m_interval(x: PeriodicTuple, i: int) -> MIntervalRecord:
    """The irreducible maximal interval with left end i (reduced to 1..n)."""
    start = (i - 1) % x.n + 1
    value, r = right_maximal_length(x, start)
    return MIntervalRecord(start=start, kappa=r - 1, average=value)


def all_m_intervals(x: PeriodicTuple) -> list[MIntervalRecord]:
    values, lengths = right_maximal_profile(x)
    return [
        MIntervalRecord(start=i + 1, kappa=lengths[i] - 1, average=values[i])
        for i in range(x.n)
    ]


def full_maximal_start(x: PeriodicTuple) -> int:
    """Smallest i in 1..n whose full window [i : i+n-1] is maximal.

    Equivalently the smallest index at which the right maximal value is
    least; that least value is the period mean.  With distinct
    short-window averages the index is unique and kappa(i) = n-1 there.
    """
    values, _ = right_maximal_profile(x)
    best = min(values)
    return values.index(best) + 1


def majorizing_rotation(x: PeriodicTuple) -> int:
    """Start of the unique rotation dominating the constant profile.

    The rotation (x_{i*}, ..., x_{i*+n-1}) has every proper prefix sum
    below k times the period mean, with equality exactly at k = n.
    """
    return full_maximal_start(x)


def has_majorizing_prefixes(x: PeriodicTuple, start: int, strict: bool = True) -> bool:
    """Check the prefix-sum domination property for one rotation."""
    mean = x.average
    left = x.prefix(start - 1)
    for k in range(1, x.n):
        partial = x.prefix(start + k - 1) - left
        if strict:
            if partial >= k * mean:
                return False
        elif partial > k * mean:
            return False
    return True


def _class_contains(parent: MIntervalRecord, child: MIntervalRecord, n: int) -> bool:
    """Whether some shift of ``child`` by a multiple of n lies inside ``parent``."""
    if parent.cardinality <= child.cardinality:
        return False
    for t in (-1, 0, 1):
        if parent.interval.contains(child.interval.shifted(t * n)):
            return True
    return False


def _classes_overlap(a: MIntervalRecord, b: MIntervalRecord, n: int) -> bool:
    """Whether representatives of the two classes share an index (mod shifts)."""
    for t in (-1, 0, 1):
        shifted = b.interval.shifted(t * n)
        if shifted.a <= a.interval.b and a.interval.a <= shifted.b:
            return True
    return False


def _link_parents(records: list[MIntervalRecord], n: int) -> dict[int, Optional[int]]:
    """Hasse parents by smallest strict container; nesting is required.

    Raises DegenerateOrder if two classes overlap without one containing
    the other, which cannot happen when short-window averages are
    pairwise distinct.
    """
    parent: dict[int, Optional[int]] = {}
    for rec in records:
        containers = [
            other
            for other in records
            if other.start != rec.start and _class_contains(other, rec, n)
        ]
        overlaps = [
            other
            for other in records
            if other.start != rec.start
            and not _class_contains(other, rec, n)
            and not _class_contains(rec, other, n)
            and _classes_overlap(rec, other, n)
        ]
        if overlaps:
            culprit = overlaps[0]
            raise DegenerateOrder(
                f"classes {rec.interval} and {culprit.interval} overlap "
                "without nesting; averages are tied"
            )
        if containers:
            smallest = min(containers, key=lambda r: (r.cardinality, r.start))
            parent[rec.start] = smallest.start
        else:
            parent[rec.start] = None
    return parent


def build_poset(x: PeriodicTuple) -> IntervalPoset:
    """Inclusion order of the n irreducible-maximal-interval classes.

    On generic inputs the result is a tree rooted at the full-length
    class.  On tied inputs the result may be a forest (root None when no
    class has cardinality n); genuinely ambiguous inclusion raises
    DegenerateOrder.
    """
    records = all_m_intervals(x)
    parent = _link_parents(records, x.n)
    roots = [rec for rec in records if rec.cardinality == x.n]
    root = min(rec.start for rec in roots) if roots else None
    return IntervalPoset(
        n=x.n,
        nodes={rec.start: rec for rec in records},
        parent=parent,
        root=root,
    )


def distinct_short_averages(x: PeriodicTuple) -> bool:
    """Surrogate genericity test: all short-window averages pairwise distinct.

    Collects the averages of [i : i+r-1] for i = 1..n, r = 1..n-1,
    together with the period mean, and checks for collisions.  Exact on
    the rational backend; quadratically many values, so callers gate it.
    """
    n = x.n
    seen = {x.average}
    count = 1
    for i in range(1, n + 1):
        left = x.prefix(i - 1)
        for r in range(1, n):
            seen.add((x.prefix(i + r - 1) - left) / r)
            count += 1
    return len(seen) == count


def average_table(x: PeriodicTuple) -> list[list[Number]]:
    """Averages of [i : i+r-1] for r = 1..n-1 (rows) and i = 1..n (columns)."""
    n = x.n
    table = []
    for r in range(1, n):
        row = []
        for i in range(1, n + 1):
            row.append(interval_average(x, IndexInterval(i, i + r - 1)))
        table.append(row)
    return table
