"""Balanced Tanner Units: matrix and Tanner-graph views, girth, cycle
taxonomy, bounds, puncturing, cross-block analysis and export formats.

Matrix orientation: rows are depths (check nodes), columns are labels
(variable nodes); entry (d, x-1) is 1 when some permutation places label
x at depth d.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import DomainError
from .microparts import MicroPartition, UnorderedLabeledPartition, stage_micropartition
from .partitions import Partition, PartitionFamilySpec, min_component
from .permutations import (
    CompatibleSet,
    Permutation,
    is_compatible,
    partition_between,
    psi,
    successor_cycles,
)

INTERACTION_SEARCH_MAX_M = 10


@dataclass(frozen=True)
class Btu:
    """r pairwise compatible permutations over m labels."""

    perms: tuple[Permutation, ...]

    def __init__(self, perms: CompatibleSet | Iterable[Permutation | Sequence[int]]):
        perms = tuple(p if isinstance(p, Permutation) else Permutation(p) for p in perms)
        if not perms:
            raise DomainError("a BTU needs at least one permutation")
        for i, j in combinations(range(len(perms)), 2):
            if perms[i].m != perms[j].m:
                raise DomainError("permutations of different lengths")
            if not is_compatible(perms[i], perms[j]):
                raise DomainError(f"permutations {i + 1} and {j + 1} collide")
        object.__setattr__(self, "perms", perms)

    @property
    def m(self) -> int:
        return self.perms[0].m

    @property
    def r(self) -> int:
        return len(self.perms)

    def matrix(self) -> np.ndarray:
        h = np.zeros((self.m, self.m), dtype=np.uint8)
        for p in self.perms:
            h[np.arange(self.m), np.asarray(p.labels) - 1] = 1
        return h

    def rows(self) -> list[list[int]]:
        """Column indices (0-based) of the ones in each row."""
        return [[p[d] - 1 for p in self.perms] for d in range(self.m)]

    def rank_key(self) -> tuple[int, ...]:
        return tuple(x for p in self.perms for x in p.labels)

    def to_dict(self) -> dict:
        return {"m": self.m, "r": self.r, "perms": [list(p.labels) for p in self.perms]}

    @classmethod
    def from_dict(cls, data: dict) -> "Btu":
        b = cls(data["perms"])
        if "m" in data and data["m"] != b.m:
            raise DomainError(f"declared m={data['m']} but permutations have length {b.m}")
        if "r" in data and data["r"] != b.r:
            raise DomainError(f"declared r={data['r']} but {b.r} permutations given")
        return b


def _row_lists(h) -> list[list[int]]:
    h = np.asarray(h)
    return [list(np.flatnonzero(h[d])) for d in range(h.shape[0])]


def tanner_girth(rows: Sequence[Sequence[int]], n_cols: int) -> Optional[int]:
    """Shortest cycle of the bipartite graph given by row adjacency lists.

    BFS from every row vertex; the first non-tree edge met while scanning
    bounds the shortest cycle through the root, and the minimum over all
    roots is exact. Every cycle passes through a row vertex, so column
    roots are not needed. Returns None for a forest.
    """
    n_rows = len(rows)
    n = n_rows + n_cols
    adj: list[list[int]] = [[] for _ in range(n)]
    for d, cols in enumerate(rows):
        for c in cols:
            adj[d].append(n_rows + int(c))
            adj[n_rows + int(c)].append(d)
    best = n + 1
    dist = [-1] * n
    parent = [-1] * n
    for root in range(n_rows):
        for i in range(n):
            dist[i] = -1
        dist[root] = 0
        parent[root] = -1
        queue = deque([root])
        while queue:
            u = queue.popleft()
            du = dist[u]
            if 2 * du + 1 >= best:
                break
            for w in adj[u]:
                if w == parent[u]:
                    continue
                if dist[w] < 0:
                    dist[w] = du + 1
                    parent[w] = u
                    queue.append(w)
                else:
                    length = du + dist[w] + 1
                    if length < best:
                        best = length
    return best if best <= n else None


def girth_of_matrix(h) -> Optional[int]:
    h = np.asarray(h)
    return tanner_girth(_row_lists(h), h.shape[1])


def girth(b: Btu) -> Optional[int]:
    """Girth of the Tanner graph; None when r < 2 (no cycles)."""
    if b.r < 2:
        return None
    return tanner_girth(b.rows(), b.m)


def stage_partitions(b: Btu) -> list[UnorderedLabeledPartition]:
    """Label sets of the cycles between consecutive permutations."""
    return [
        UnorderedLabeledPartition(successor_cycles(p, q)) for p, q in zip(b.perms, b.perms[1:])
    ]


def consecutive_partitions(b: Btu) -> list[Partition]:
    return [partition_between(p, q) for p, q in zip(b.perms, b.perms[1:])]


def known_cycles(b: Btu) -> list[int]:
    """Multiset {2q} over the components of every consecutive partition, sorted."""
    if b.r < 2:
        raise DomainError("known cycles need r >= 2")
    return sorted(2 * q for beta in consecutive_partitions(b) for q in beta.parts)


def all_pair_partitions(b: Btu) -> dict[tuple[int, int], Partition]:
    """Partition between p_u and p_v for every 1 <= u < v <= r."""
    if b.r < 2:
        raise DomainError("pair partitions need r >= 2")
    return {
        (u + 1, v + 1): partition_between(b.perms[u], b.perms[v])
        for u, v in combinations(range(b.r), 2)
    }


def girth_upper_bound(spec: PartitionFamilySpec) -> int:
    return 2 * min_component(spec)


def micropartition_cycle_bound(
    beta_u: Partition, beta_v: Partition, micro: MicroPartition, t_u: int
) -> Optional[int]:
    """min over cells x >= 2 of 2 * (q_{u,j} / x + t_u - 1).

    ``q_{u,j}`` is the j-th component of ``beta_u`` (the micro-partition
    row). Division truncates. Returns None when no cell holds two or more
    labels, i.e. no micro-partition cycle exists.
    """
    if micro.row_margins != beta_u.parts or micro.col_margins != beta_v.parts:
        raise DomainError("micro-partition margins do not match the partitions")
    if not 1 <= t_u <= beta_u.y:
        raise DomainError(f"t_u={t_u} outside 1..{beta_u.y}")
    return _cell_bound(micro, t_u)


def _cell_bound(micro: MicroPartition, t_u: int) -> Optional[int]:
    values = [
        2 * (q // x + t_u - 1)
        for q, row in zip(micro.row_margins, micro.cells)
        for x in row
        if x >= 2
    ]
    return min(values) if values else None


def circular_distance(w1: int, w2: int, k: int) -> int:
    d = abs(w1 - w2)
    return min(d, k - d)


def puncture(b: Btu, zero_position: tuple[int, int]) -> int:
    """Girth after flipping one zero of a (k,2) BTU to one."""
    h = b.matrix()
    row, col = zero_position
    if h[row, col]:
        raise DomainError(f"position {zero_position} already holds a one")
    h[row, col] = 1
    return girth_of_matrix(h)


def puncture_profile(k: int) -> dict[tuple[int, int], int]:
    """Girth after each possible single flip of the canonical (k,2) BTU."""
    b = Btu(psi(Partition([k])))
    h = b.matrix()
    return {
        (row, col): puncture(b, (row, col))
        for row in range(k)
        for col in range(k)
        if not h[row, col]
    }


def puncture_bound(k: int) -> int:
    return k if k % 2 == 0 else k + 1


@dataclass
class CrossBlockView:
    k: int
    sub_blocks: list[np.ndarray]
    cross_blocks: dict[tuple[int, int], np.ndarray]

    def ones(self) -> int:
        return int(sum(b.sum() for b in self.sub_blocks) + sum(b.sum() for b in self.cross_blocks.values()))


def crossblock_decompose(b: Btu | np.ndarray, k: int) -> CrossBlockView:
    """Tile the matrix into k x k blocks; keys are 1-based block indices."""
    h = b.matrix() if isinstance(b, Btu) else np.asarray(b)
    m = h.shape[0]
    if k < 1 or m % k:
        raise DomainError(f"block size {k} does not divide m={m}")
    n = m // k
    blk = lambda i, j: h[i * k:(i + 1) * k, j * k:(j + 1) * k].copy()  # noqa: E731
    subs = [blk(i, i) for i in range(n)]
    cross = {(i + 1, j + 1): blk(i, j) for i in range(n) for j in range(n) if i != j}
    return CrossBlockView(k, subs, cross)


def three_one_placements(k: int) -> Iterable[tuple[tuple[int, int], ...]]:
    """Every set of three zero positions inside CB(1,2) or CB(2,1) of the
    block-diagonal (2k,2) BTU built from Psi((k,k))."""
    cross = [(d, x) for d in range(2 * k) for x in range(2 * k) if (d < k) != (x < k)]
    return combinations(cross, 3)


def three_one_girths(k: int) -> dict[tuple[tuple[int, int], ...], int]:
    """Girth after adding three ones in the cross-blocks, for every placement."""
    base = Btu(psi(Partition([k, k]))).rows()
    out = {}
    for trip in three_one_placements(k):
        rows = [list(r) for r in base]
        for d, x in trip:
            rows[d].append(x)
        out[trip] = tanner_girth(rows, 2 * k)
    return out


def _colour_edges(b: Btu) -> dict[tuple[int, int], int]:
    return {(d, b.m + p[d] - 1): i for i, p in enumerate(b.perms) for d in range(b.m)}


def min_interaction_cycle(b: Btu, max_m: int = INTERACTION_SEARCH_MAX_M) -> Optional[int]:
    """Shortest cycle that is not a known cycle.

    Known cycles use edges of two consecutive permutations only; any other
    cycle touches two permutations whose indices differ by at least two.
    Found by iterative-deepening enumeration of simple cycles, so the size
    is capped at ``max_m``; returns None above the cap, for r < 3, or when
    no such cycle exists.
    """
    if b.r < 3 or b.m > max_m:
        return None
    m = b.m
    colour = _colour_edges(b)
    adj: list[list[int]] = [[] for _ in range(2 * m)]
    for (d, x) in colour:
        adj[d].append(x)
        adj[x].append(d)

    def col(u: int, v: int) -> int:
        return colour[(u, v)] if u < v else colour[(v, u)]

    g = girth(b)
    for length in range(g, 2 * m + 1, 2):
        for start in range(m):
            path = [start]
            on = [False] * (2 * m)
            on[start] = True

            def dfs(u: int, lo: int, hi: int) -> bool:
                if len(path) == length:
                    if start in adj[u]:
                        c = col(u, start)
                        if max(hi, c) - min(lo, c) >= 2:
                            return True
                    return False
                for w in adj[u]:
                    # depth vertices on the cycle must exceed the start
                    if on[w] or (w < m and w < start):
                        continue
                    c = col(u, w)
                    on[w] = True
                    path.append(w)
                    if dfs(w, min(lo, c), max(hi, c)):
                        return True
                    path.pop()
                    on[w] = False
                return False

            if dfs(start, b.r, -1):
                return length
    return None


@dataclass
class CycleReport:
    girth: Optional[int]
    known_cycles: list[int]
    pair_partitions: dict[tuple[int, int], Partition]
    micro_bounds: list[int] = field(default_factory=list)
    min_interaction_cycle: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "girth": self.girth,
            "known_cycles": self.known_cycles,
            "pair_partitions": {f"{u},{v}": list(p.parts) for (u, v), p in self.pair_partitions.items()},
            "micro_bounds": self.micro_bounds,
            "min_interaction_cycle": self.min_interaction_cycle,
        }


def cycle_report(b: Btu) -> CycleReport:
    """Girth together with the known-cycle, pair-partition and
    micro-partition-cycle breakdown."""
    stages = stage_partitions(b)
    bounds = []
    for u, v in combinations(range(len(stages)), 2):
        for a, c in ((stages[u], stages[v]), (stages[v], stages[u])):
            val = _cell_bound(stage_micropartition(a, c), 1)
            if val is not None:
                bounds.append(val)
    return CycleReport(
        girth=girth(b),
        known_cycles=known_cycles(b),
        pair_partitions=all_pair_partitions(b),
        micro_bounds=sorted(bounds),
        min_interaction_cycle=min_interaction_cycle(b),
    )


def to_alist(h) -> str:
    """MacKay alist text: ``n_cols n_rows``, max degrees, degree lists, then
    1-based column and row index lists."""
    h = np.asarray(h)
    n_rows, n_cols = h.shape
    col_lists = [list(np.flatnonzero(h[:, c]) + 1) for c in range(n_cols)]
    row_lists = [list(np.flatnonzero(h[r]) + 1) for r in range(n_rows)]
    col_deg = [len(c) for c in col_lists]
    row_deg = [len(r) for r in row_lists]
    lines = [
        f"{n_cols} {n_rows}",
        f"{max(col_deg)} {max(row_deg)}",
        " ".join(map(str, col_deg)),
        " ".join(map(str, row_deg)),
    ]
    lines += [" ".join(map(str, c)) for c in col_lists]
    lines += [" ".join(map(str, r)) for r in row_lists]
    return "\n".join(lines) + "\n"


def parse_alist(text: str) -> np.ndarray:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    try:
        n_cols, n_rows = int(lines[0][0]), int(lines[0][1])
        h = np.zeros((n_rows, n_cols), dtype=np.uint8)
        for c, entries in enumerate(lines[4:4 + n_cols]):
            for e in map(int, entries):
                if e > 0:
                    h[e - 1, c] = 1
        for r, entries in enumerate(lines[4 + n_cols:4 + n_cols + n_rows]):
            for e in map(int, entries):
                if e > 0 and not h[r, e - 1]:
                    raise DomainError(f"row list {r + 1} disagrees with column lists")
    except (IndexError, ValueError) as exc:
        raise DomainError(f"malformed alist: {exc}") from None
    return h


def to_dot(b: Btu) -> str:
    lines = ["graph btu {"]
    lines += [f"  d{d} [shape=box];" for d in range(b.m)]
    lines += [f"  x{x} [shape=circle];" for x in range(1, b.m + 1)]
    for i, p in enumerate(b.perms, start=1):
        lines += [f'  d{d} -- x{p[d]} [label="p{i}"];' for d in range(b.m)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export(b: Btu, fmt: str) -> str:
    if fmt == "alist":
        return to_alist(b.matrix())
    if fmt == "dot":
        return to_dot(b)
    if fmt == "json":
        return json.dumps(b.to_dict(), separators=(",", ":")) + "\n"
    raise DomainError(f"unknown export format {fmt!r}")
