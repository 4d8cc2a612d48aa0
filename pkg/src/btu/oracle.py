"""Brute-force reference implementations for verification.

Nothing here calls the girth, partition or enumeration code it is meant
to check: graphs are rebuilt from raw label sequences and cycle types are
recomputed from scratch. Every routine carries a hard size guard and
refuses larger inputs instead of truncating.
"""

from __future__ import annotations

from itertools import permutations
from typing import Optional, Sequence

from .errors import GuardRefusal

GIRTH_MAX_M = 12
COUNT_MAX_M = 9
BEST_GIRTH_MAX_M = 6
BEST_GIRTH_MAX_R = 3
CANONICAL_MAX_M = 5


def _labels(b) -> list[tuple[int, ...]]:
    perms = getattr(b, "perms", b)
    return [tuple(getattr(p, "labels", p)) for p in perms]


def _graph(perms: Sequence[Sequence[int]]) -> dict[tuple[str, int], set]:
    g: dict[tuple[str, int], set] = {}
    for p in perms:
        for d, x in enumerate(p):
            g.setdefault(("d", d), set()).add(("x", x))
            g.setdefault(("x", x), set()).add(("d", d))
    return g


def _has_cycle_of_length(g, length: int) -> bool:
    order = sorted(g)
    rank = {v: i for i, v in enumerate(order)}
    for start in order:
        # start is the lowest-ranked vertex on the cycle
        stack = [(start, (start,))]
        while stack:
            u, path = stack.pop()
            if len(path) == length:
                if start in g[u]:
                    return True
                continue
            for w in g[u]:
                if rank[w] > rank[start] and w not in path:
                    stack.append((w, path + (w,)))
    return False


def brute_force_girth(b) -> Optional[int]:
    """Shortest cycle found by enumerating simple closed walks of each
    even length in turn."""
    perms = _labels(b)
    m = len(perms[0])
    if m > GIRTH_MAX_M:
        raise GuardRefusal(f"brute_force_girth refuses m={m} > {GIRTH_MAX_M}")
    if len(perms) < 2:
        return None
    g = _graph(perms)
    for length in range(4, 2 * m + 1, 2):
        if _has_cycle_of_length(g, length):
            return length
    return None


def _cycle_type(q: Sequence[int]) -> tuple[int, ...]:
    # q as a map i -> q[i-1] on 1..m
    m = len(q)
    seen = [False] * (m + 1)
    sizes = []
    for i in range(1, m + 1):
        n = 0
        while not seen[i]:
            seen[i] = True
            i = q[i - 1]
            n += 1
        if n:
            sizes.append(n)
    return tuple(sorted(sizes, reverse=True))


def brute_force_count_permutations(beta) -> int:
    """Count q in S_m whose successor map against the identity has cycle
    type ``beta``, by scanning all of S_m."""
    parts = tuple(sorted(getattr(beta, "parts", beta), reverse=True))
    m = sum(parts)
    if m > COUNT_MAX_M:
        raise GuardRefusal(f"brute_force_count_permutations refuses m={m} > {COUNT_MAX_M}")
    return sum(1 for q in permutations(range(1, m + 1)) if _cycle_type(q) == parts)


def _compatible(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x != y for x, y in zip(a, b))


def brute_force_best_girth(m: int, r: int) -> tuple[Optional[int], tuple[tuple[int, ...], ...]]:
    """Exact best girth over tree-ordered compatible tuples starting at the
    identity, by full scan of S_m per position. The witness is the first
    best tuple in lexicographic order."""
    if m > BEST_GIRTH_MAX_M or r > BEST_GIRTH_MAX_R:
        raise GuardRefusal(
            f"brute_force_best_girth refuses (m={m}, r={r}); limits m<={BEST_GIRTH_MAX_M}, r<={BEST_GIRTH_MAX_R}"
        )
    if r < 2 or r > m:
        raise GuardRefusal(f"no compatible tuple for (m={m}, r={r})")
    ident = tuple(range(1, m + 1))
    all_perms = list(permutations(range(1, m + 1)))
    best: Optional[int] = None
    witness: tuple = ()

    def extend(chosen: list[tuple[int, ...]]):
        nonlocal best, witness
        if len(chosen) == r:
            g = brute_force_girth(chosen)
            if g is not None and (best is None or g > best):
                best, witness = g, tuple(chosen)
            return
        for q in all_perms:
            if q[0] > chosen[-1][0] and all(_compatible(q, p) for p in chosen):
                chosen.append(q)
                extend(chosen)
                chosen.pop()

    extend([ident])
    return best, witness


def canonical_form(b) -> bytes:
    """Smallest row-major 0/1 encoding over all row and column orders."""
    perms = _labels(b)
    m = len(perms[0])
    if m > CANONICAL_MAX_M:
        raise GuardRefusal(f"canonical_form refuses m={m} > {CANONICAL_MAX_M}")
    ones = {(d, x - 1) for p in perms for d, x in enumerate(p)}
    best = None
    idx = range(m)
    for rows in permutations(idx):
        for cols in permutations(idx):
            code = bytes(1 if (rows[i], cols[j]) in ones else 0 for i in idx for j in idx)
            if best is None or code < best:
                best = code
    return best
