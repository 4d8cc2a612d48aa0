"""Micro-partitions, label mappings, labeled partitions and cycle orders.

A micro-partition records how many labels of each component of one
partition land in each component of the next. Label mappings turn it into
concrete label sets, cycle orders turn those into the next permutation.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from math import comb, prod
from typing import Iterator, Sequence

from .errors import DomainError
from .partitions import Partition
from .permutations import CompatibleSet, Permutation, successor_cycles


@dataclass(frozen=True)
class MicroPartition:
    """Non-negative integer matrix with prescribed row and column sums."""

    cells: tuple[tuple[int, ...], ...]
    row_margins: tuple[int, ...]
    col_margins: tuple[int, ...]

    def __post_init__(self):
        if len(self.cells) != len(self.row_margins):
            raise DomainError("row count does not match row margins")
        for row, want in zip(self.cells, self.row_margins):
            if len(row) != len(self.col_margins):
                raise DomainError("column count does not match column margins")
            if any(x < 0 for x in row) or sum(row) != want:
                raise DomainError(f"row {row} does not sum to {want}")
        for z, want in enumerate(self.col_margins):
            if sum(row[z] for row in self.cells) != want:
                raise DomainError(f"column {z} does not sum to {want}")

    @classmethod
    def of(cls, cells: Sequence[Sequence[int]]) -> "MicroPartition":
        """Build from cells alone, reading the margins off the matrix."""
        cells = tuple(tuple(int(x) for x in row) for row in cells)
        rows = tuple(sum(r) for r in cells)
        cols = tuple(sum(c) for c in zip(*cells))
        return cls(cells, rows, cols)

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.col_margins)

    def as_lists(self) -> list[list[int]]:
        return [list(r) for r in self.cells]


@dataclass(frozen=True)
class UnorderedLabeledPartition:
    """Disjoint label sets, each of size >= 2, kept as sorted tuples."""

    subsets: tuple[tuple[int, ...], ...]

    def __init__(self, subsets: Sequence[Sequence[int]]):
        subsets = tuple(tuple(sorted(int(x) for x in s)) for s in subsets)
        seen: set[int] = set()
        for s in subsets:
            if len(s) < 2:
                raise DomainError(f"labeled component {s} has fewer than 2 labels")
            if seen.intersection(s):
                raise DomainError("labeled components overlap")
            seen.update(s)
        object.__setattr__(self, "subsets", subsets)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.subsets)

    @property
    def m(self) -> int:
        return sum(self.sizes)

    def partition(self) -> Partition:
        return Partition(self.sizes)

    def key(self) -> frozenset:
        return frozenset(frozenset(s) for s in self.subsets)


@dataclass(frozen=True)
class OrderedLabeledPartition:
    """One cycle order per labeled component."""

    subsets: tuple[tuple[int, ...], ...]

    def __init__(self, subsets: Sequence[Sequence[int]]):
        subsets = tuple(tuple(int(x) for x in s) for s in subsets)
        UnorderedLabeledPartition(subsets)  # validates disjointness and sizes
        object.__setattr__(self, "subsets", subsets)

    def canonical(self) -> "OrderedLabeledPartition":
        """Rotate every cycle so it starts at its minimum label."""
        out = []
        for c in self.subsets:
            i = c.index(min(c))
            out.append(c[i:] + c[:i])
        return OrderedLabeledPartition(out)

    def is_canonical(self) -> bool:
        return all(c[0] == min(c) for c in self.subsets)

    def unordered(self) -> UnorderedLabeledPartition:
        return UnorderedLabeledPartition(self.subsets)

    def partition(self) -> Partition:
        return Partition([len(c) for c in self.subsets])


def _tables(rows: tuple[int, ...], cols: list[int]) -> Iterator[list[tuple[int, ...]]]:
    if not rows:
        if not any(cols):
            yield []
        return
    head, tail = rows[0], rows[1:]

    def fill(z: int, left: int, row: list[int]) -> Iterator[tuple[int, ...]]:
        if z == len(cols) - 1:
            if left <= cols[z]:
                yield tuple(row + [left])
            return
        for x in range(min(left, cols[z]), -1, -1):
            yield from fill(z + 1, left - x, row + [x])

    for row in fill(0, head, []):
        remaining = [c - x for c, x in zip(cols, row)]
        for tail_rows in _tables(tail, remaining):
            yield [row] + tail_rows


def enumerate_micropartitions(beta_u: Partition, beta_v: Partition) -> list[MicroPartition]:
    """Every matrix with row sums ``beta_u.parts`` and column sums
    ``beta_v.parts``, in descending row-major order of cell values."""
    if beta_u.m != beta_v.m:
        raise DomainError("partitions of different totals")
    return [
        MicroPartition(tuple(t), beta_u.parts, beta_v.parts)
        for t in _tables(beta_u.parts, list(beta_v.parts))
    ]


def count_label_mappings(micro: MicroPartition) -> int:
    """Product over cells of C(row margin - labels already taken, cell)."""
    total = 1
    for row, pj in zip(micro.cells, micro.row_margins):
        taken = 0
        for x in row:
            total *= comb(pj - taken, x)
            taken += x
    return total


def _splits(labels: tuple[int, ...], sizes: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    if not sizes:
        yield []
        return
    for pick in combinations(labels, sizes[0]):
        rest = tuple(x for x in labels if x not in pick)
        for tail in _splits(rest, sizes[1:]):
            yield [pick] + tail


def enumerate_label_mappings(
    micro: MicroPartition, source: UnorderedLabeledPartition
) -> Iterator[UnorderedLabeledPartition]:
    """Split source component j into cells of sizes ``micro.cells[j]`` and
    gather column z into target component z."""
    if source.sizes != micro.row_margins:
        raise DomainError(
            f"source sizes {source.sizes} do not match row margins {micro.row_margins}"
        )
    per_row = [list(_splits(b, row)) for b, row in zip(source.subsets, micro.cells)]

    def rec(j: int, acc: list[list[int]]) -> Iterator[UnorderedLabeledPartition]:
        if j == len(per_row):
            yield UnorderedLabeledPartition(acc)
            return
        for cells in per_row[j]:
            yield from rec(j + 1, [a + list(c) for a, c in zip(acc, cells)])

    yield from rec(0, [[] for _ in micro.col_margins])


def enumerate_cycle_orders(
    target: UnorderedLabeledPartition,
    context: CompatibleSet | Sequence[Permutation],
    restricted: bool = True,
) -> Iterator[OrderedLabeledPartition]:
    """Cycle orders on ``target`` whose assembled permutation is compatible
    with every context permutation.

    The permutation is assembled against the last context permutation. In
    restricted mode the first context permutation must be the identity and
    every cycle starts at its minimum label; otherwise all rotations are
    emitted too.
    """
    perms = list(context)
    if not perms:
        raise DomainError("context must hold at least one permutation")
    prev = perms[-1]
    m = prev.m
    if target.m != m:
        raise DomainError(f"target covers {target.m} labels, expected {m}")
    if restricted and perms[0] != Permutation.identity(m):
        raise DomainError("restricted enumeration assumes the first permutation is the identity")
    pos = prev.depth_of()
    forbidden = [frozenset(p[d] for p in perms) for d in range(m)]
    subsets = target.subsets

    def orders(s: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        # grow the cycle one label at a time, checking the depth it fills
        def grow(seq: list[int], rest: list[int]) -> Iterator[tuple[int, ...]]:
            if not rest:
                if seq[0] not in forbidden[pos[seq[-1]]]:
                    yield tuple(seq)
                return
            bad = forbidden[pos[seq[-1]]]
            for i, x in enumerate(rest):
                if x in bad:
                    continue
                seq.append(x)
                yield from grow(seq, rest[:i] + rest[i + 1:])
                seq.pop()

        starts = (s[0],) if restricted else s
        for a in starts:
            yield from grow([a], [x for x in s if x != a])

    def rec(i: int, acc: list[tuple[int, ...]]) -> Iterator[OrderedLabeledPartition]:
        if i == len(subsets):
            yield OrderedLabeledPartition(acc)
            return
        for c in orders(subsets[i]):
            acc.append(c)
            yield from rec(i + 1, acc)
            acc.pop()

    yield from rec(0, [])


def assemble_permutation(prev: Permutation, order: OrderedLabeledPartition) -> Permutation:
    """Place the cyclic successor of each label at the depth where ``prev``
    holds that label."""
    pos = prev.depth_of()
    q = [0] * prev.m
    for c in order.subsets:
        for a, b in zip(c, c[1:] + c[:1]):
            q[pos[a]] = b
    if 0 in q:
        raise DomainError("ordered labeled partition does not cover every label")
    return Permutation(q)


def decompose(prev: Permutation, q: Permutation) -> OrderedLabeledPartition:
    """Cycle orders that reassemble ``q`` from ``prev``."""
    return OrderedLabeledPartition(successor_cycles(prev, q))


def stage_micropartition(
    source: UnorderedLabeledPartition, target: UnorderedLabeledPartition
) -> MicroPartition:
    """Intersection sizes between two labeled partitions of the same label set."""
    cells = [[len(set(b) & set(c)) for c in target.subsets] for b in source.subsets]
    return MicroPartition(tuple(tuple(r) for r in cells), source.sizes, target.sizes)


def n_rotations(target: UnorderedLabeledPartition) -> int:
    return prod(target.sizes)
