"""Partitions of m with every part at least 2, plus scaling and the
optimal-partition generator for girth-maximum families."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from .errors import DomainError


@dataclass(frozen=True, order=True)
class Partition:
    """An element of P2(m): parts stored in non-increasing order."""

    parts: tuple[int, ...]

    def __init__(self, parts: Sequence[int]):
        parts = tuple(sorted((int(q) for q in parts), reverse=True))
        if not parts:
            raise DomainError("a partition needs at least one part")
        for q in parts:
            if q < 2:
                raise DomainError(f"partition part {q} is smaller than 2")
        object.__setattr__(self, "parts", parts)

    @property
    def m(self) -> int:
        return sum(self.parts)

    @property
    def y(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))

    @classmethod
    def parse(cls, text: str) -> "Partition":
        """Parse ``"3,2"`` style text."""
        try:
            parts = [int(tok) for tok in text.split(",") if tok.strip()]
        except ValueError:
            raise DomainError(f"malformed partition {text!r}") from None
        return cls(parts)


@dataclass(frozen=True)
class PartitionFamilySpec:
    """Parameters (m, r, beta_1..beta_{r-1}) of a family of BTUs."""

    m: int
    r: int
    betas: tuple[Partition, ...]

    def __init__(self, m: int, r: int, betas: Sequence[Partition]):
        betas = tuple(b if isinstance(b, Partition) else Partition(b) for b in betas)
        if r < 2:
            raise DomainError("a family needs r >= 2")
        if len(betas) != r - 1:
            raise DomainError(f"expected {r - 1} partitions for r={r}, got {len(betas)}")
        for beta in betas:
            if beta.m != m:
                raise DomainError(f"partition {beta} does not sum to m={m}")
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "betas", betas)

    @classmethod
    def from_betas(cls, betas: Sequence[Partition | Sequence[int]]) -> "PartitionFamilySpec":
        betas = [b if isinstance(b, Partition) else Partition(b) for b in betas]
        if not betas:
            raise DomainError("at least one partition is required")
        return cls(betas[0].m, len(betas) + 1, betas)

    def as_lists(self) -> list[list[int]]:
        return [list(b.parts) for b in self.betas]


def _p2(m: int, largest: int) -> Iterator[tuple[int, ...]]:
    # parts <= largest, all >= 2, reverse-lexicographic
    if m == 0:
        yield ()
        return
    for q in range(min(m, largest), 1, -1):
        rest = m - q
        if rest == 1:
            continue
        for tail in _p2(rest, q):
            yield (q,) + tail


def enumerate_p2(m: int) -> list[Partition]:
    """All partitions of ``m`` into parts >= 2, in reverse-lexicographic order."""
    if m < 2:
        raise DomainError(f"P2({m}) is empty")
    return [Partition(p) for p in _p2(m, m)]


def scale(alpha: Partition, k: int) -> Partition:
    """Replicate every component of ``alpha`` k times (a partition of k*m)."""
    if k < 1:
        raise DomainError("scale factor must be positive")
    return Partition(alpha.parts * k)


def optimal_partitions_closed_form(k: int, r: int, b: int = 1) -> list[Partition]:
    """beta_i = k^(r-1-i) copies of b*k^i for i = 1..r-1."""
    return [Partition([b * k**i] * k ** (r - 1 - i)) for i in range(1, r)]


def optimal_partitions(k: int, r: int, b: int = 1) -> list[Partition]:
    """Optimal partition parameters for a girth-maximum (b*k^(r-1), r) BTU.

    Runs the iterative generator: each round opens a single-component
    partition of the running total and scales every earlier partition by
    ``k``. The result is checked against the closed form before returning.
    """
    if k < 2 or r < 2 or b < 1:
        raise DomainError("need k >= 2, r >= 2, b >= 1")
    betas: list[Partition] = []
    m = b * k
    for _ in range(1, r):
        betas = [scale(beta, k) for beta in betas]
        betas.append(Partition([m]))
        m *= k
    expected = optimal_partitions_closed_form(k, r, b)
    if betas != expected:  # pragma: no cover - guarded by tests
        raise AssertionError(f"generator {betas} disagrees with closed form {expected}")
    return betas


def factorize_m(m: int, r: int) -> tuple[int, int]:
    """Return ``(k, b)`` with ``m == b * k**(r-1)`` and ``b`` minimal."""
    if m < 2:
        raise DomainError("m must be at least 2")
    if r < 2:
        raise DomainError("r must be at least 2")
    e = r - 1
    k = 1
    c = 2
    while c**e <= m:
        if m % c**e == 0:
            k = c
        c += 1
    return k, m // k**e


def min_component(spec: PartitionFamilySpec) -> int:
    return min(min(beta.parts) for beta in spec.betas)
