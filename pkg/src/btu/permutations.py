"""Permutations as label sequences, compatibility, the partition between
two permutations, the canonical block-shift construction and the
counting formula for permutations with a prescribed partition."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, Optional, Sequence

from .errors import DomainError
from .partitions import Partition


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection on {1..m}; ``labels[d]`` is the label placed at depth d."""

    labels: tuple[int, ...]

    def __init__(self, labels: Iterable[int]):
        labels = tuple(int(x) for x in labels)
        if sorted(labels) != list(range(1, len(labels) + 1)):
            raise DomainError(f"{labels} is not a permutation of 1..{len(labels)}")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def identity(cls, m: int) -> "Permutation":
        return cls(range(1, m + 1))

    @classmethod
    def shift(cls, m: int, s: int = 1) -> "Permutation":
        """Cyclic shift: depth d carries label ((d + s) mod m) + 1."""
        return cls((d + s) % m + 1 for d in range(m))

    @property
    def m(self) -> int:
        return len(self.labels)

    def depth_of(self) -> list[int]:
        """Inverse map: ``depth_of()[x]`` is the depth holding label x (index 0 unused)."""
        pos = [0] * (self.m + 1)
        for d, x in enumerate(self.labels):
            pos[x] = d
        return pos

    def __getitem__(self, d: int) -> int:
        return self.labels[d]

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[int]:
        return iter(self.labels)


@dataclass(frozen=True)
class CompatibleSet:
    """r pairwise compatible permutations in symmetric-permutation-tree order."""

    perms: tuple[Permutation, ...]

    def __init__(self, perms: Iterable[Permutation | Sequence[int]]):
        perms = tuple(p if isinstance(p, Permutation) else Permutation(p) for p in perms)
        if not perms:
            raise DomainError("a compatible set needs at least one permutation")
        m = perms[0].m
        for p in perms:
            if p.m != m:
                raise DomainError("permutations of different lengths")
        for a, b in zip(perms, perms[1:]):
            if not a[0] < b[0]:
                raise DomainError("first labels must increase (tree order)")
        for i in range(len(perms)):
            for j in range(i + 1, len(perms)):
                if not is_compatible(perms[i], perms[j]):
                    raise DomainError(f"permutations {i + 1} and {j + 1} collide")
        object.__setattr__(self, "perms", perms)

    @property
    def m(self) -> int:
        return self.perms[0].m

    @property
    def r(self) -> int:
        return len(self.perms)

    def extend(self, q: Permutation) -> "CompatibleSet":
        return CompatibleSet(self.perms + (q,))

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.perms)

    def __len__(self) -> int:
        return len(self.perms)

    def __getitem__(self, i: int) -> Permutation:
        return self.perms[i]


def is_compatible(p: Permutation, q: Permutation) -> bool:
    if p.m != q.m:
        raise DomainError("permutations of different lengths")
    return all(a != b for a, b in zip(p.labels, q.labels))


def successor_map(p_a: Permutation, p_b: Permutation) -> list[int]:
    """tau[x] = label that p_b places at the depth where p_a places x."""
    pos = p_a.depth_of()
    tau = [0] * (p_a.m + 1)
    for x in range(1, p_a.m + 1):
        tau[x] = p_b[pos[x]]
    return tau


def successor_cycles(p_a: Permutation, p_b: Permutation) -> list[tuple[int, ...]]:
    """Cycles of the successor map, each starting at its smallest label,
    sorted by that label."""
    tau = successor_map(p_a, p_b)
    seen = [False] * len(tau)
    cycles = []
    for x in range(1, len(tau)):
        if seen[x]:
            continue
        cyc = []
        y = x
        while not seen[y]:
            seen[y] = True
            cyc.append(y)
            y = tau[y]
        cycles.append(tuple(cyc))
    return cycles


def partition_between(p_a: Permutation, p_b: Permutation) -> Partition:
    if p_a.m != p_b.m:
        raise DomainError("permutations of different lengths")
    sizes = [len(c) for c in successor_cycles(p_a, p_b)]
    if min(sizes) < 2:
        raise DomainError("permutations are not compatible (fixed point in successor map)")
    return Partition(sizes)


def psi(beta: Partition) -> CompatibleSet:
    """Identity plus a +1 cyclic shift inside consecutive label blocks."""
    labels = []
    start = 0
    for q in beta.parts:
        labels.extend(start + (d + 1) % q + 1 for d in range(q))
        start += q
    return CompatibleSet([Permutation.identity(beta.m), Permutation(labels)])


def enumerate_compatible(
    context: CompatibleSet | Sequence[Permutation],
    constraint: Optional[Partition] = None,
) -> Iterator[Permutation]:
    """Depth-first leaf order over permutations extending ``context``.

    Yields every q compatible with all context permutations, whose first
    label exceeds the first label of the last context permutation, and,
    when ``constraint`` is given, whose partition with the last context
    permutation equals it.
    """
    perms = list(context)
    last = perms[-1]
    m = last.m
    if constraint is not None and constraint.m != m:
        raise DomainError(f"constraint {constraint} is not a partition of {m}")
    forbidden = [frozenset(p[d] for p in perms) for d in range(m)]
    used = [False] * (m + 1)
    q = [0] * m
    first_min = last[0] + 1

    if constraint is None:
        def rec(d: int) -> Iterator[Permutation]:
            if d == m:
                yield Permutation(q)
                return
            bad = forbidden[d]
            lo = first_min if d == 0 else 1
            for x in range(lo, m + 1):
                if used[x] or x in bad:
                    continue
                used[x] = True
                q[d] = x
                yield from rec(d + 1)
                used[x] = False

        yield from rec(0)
        return

    # successor tau(last[d]) = q[d]; track chains of tau to prune on cycle type
    need = Counter(constraint.parts)
    biggest = max(constraint.parts)
    tau = [0] * (m + 1)
    pre = [0] * (m + 1)  # pre[y] = x with tau[x] = y

    def chain_len(x: int) -> int:
        # x is a chain start; walk forward
        n = 1
        while tau[x]:
            x = tau[x]
            n += 1
        return n

    def rec_c(d: int) -> Iterator[Permutation]:
        if d == m:
            yield Permutation(q)
            return
        bad = forbidden[d]
        src = last[d]
        lo = first_min if d == 0 else 1
        for x in range(lo, m + 1):
            if used[x] or x in bad:
                continue
            # link src -> x
            start = src
            while pre[start]:
                start = pre[start]
            closes = start == x
            if closes:
                n = chain_len(x)  # includes src already; closing adds no label
                if need[n] <= 0:
                    continue
                need[n] -= 1
            else:
                # new chain length: start..src then x..end
                n = chain_len(start) + chain_len(x)
                if n > biggest:
                    continue
            used[x] = True
            q[d] = x
            tau[src] = x
            pre[x] = src
            yield from rec_c(d + 1)
            tau[src] = 0
            pre[x] = 0
            used[x] = False
            if closes:
                need[n] += 1

    yield from rec_c(0)


def count_f(beta: Partition) -> int | Fraction:
    """The printed counting formula, evaluated verbatim.

    f = (m-1) * sum over distinct part values p_j of
        (m-1)! / ((p_j - 1) * prod_{i != j} p_i)

    Only the single-part case is known to count permutations correctly;
    compare with :func:`btu.oracle.brute_force_count_permutations`.
    """
    m = beta.m
    parts = list(beta.parts)
    total = Fraction(0)
    seen = set()
    for j, pj in enumerate(parts):
        if pj in seen:
            continue
        seen.add(pj)
        denom = pj - 1
        for i, pi in enumerate(parts):
            if i != j:
                denom *= pi
        total += Fraction(factorial(m - 1), denom)
    value = (m - 1) * total
    return int(value) if value.denominator == 1 else value


def cycle_type_count(beta: Partition) -> int:
    """Number of permutations of S_m whose cycle type is ``beta``
    (m! / (prod q * prod mult!))."""
    m = beta.m
    denom = 1
    for q, mult in Counter(beta.parts).items():
        denom *= q**mult * factorial(mult)
    return factorial(m) // denom
