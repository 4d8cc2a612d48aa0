"""Search drivers for girth-maximum BTUs.

All drivers fix the first permutation to the identity and explore a tree
of candidates. Candidates are grouped into branches (one per choice at the
first free stage); each branch is scanned in a fixed order and reports its
record sequence of improvements together with the candidate index at which
each happened. Merging those records in branch order reproduces the serial
result for any candidate budget, so the answer does not depend on the
number of workers.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Iterator, Optional, Sequence

from .errors import DomainError
from .microparts import (
    UnorderedLabeledPartition,
    assemble_permutation,
    enumerate_cycle_orders,
    enumerate_label_mappings,
    enumerate_micropartitions,
)
from .partitions import (
    Partition,
    PartitionFamilySpec,
    enumerate_p2,
    factorize_m,
    optimal_partitions,
)
from .permutations import Permutation, enumerate_compatible, psi
from .tanner import Btu, girth, girth_upper_bound

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SearchBudget:
    max_candidates: Optional[int] = None
    max_seconds: Optional[float] = None
    parallel_width: int = 1

    def __post_init__(self):
        if self.max_candidates is not None and self.max_candidates < 0:
            raise DomainError("max_candidates must be non-negative")
        if self.parallel_width < 1:
            raise DomainError("parallel_width must be at least 1")

    @property
    def exhaustive(self) -> bool:
        return self.max_candidates is None and self.max_seconds is None


@dataclass
class CensusRow:
    betas: tuple[Partition, ...]
    best_girth: Optional[int]
    classes_seen: int

    @property
    def beta_tuple(self) -> str:
        return ":".join(str(b) for b in self.betas)


@dataclass
class SearchResult:
    best: Optional[Btu]
    girth: Optional[int]
    explored: int
    witness_rank: tuple[int, ...] = ()
    mode: str = ""
    spec: Optional[PartitionFamilySpec] = None
    metadata: dict = field(default_factory=dict)
    census: list[CensusRow] = field(default_factory=list)

    def __post_init__(self):
        if self.best is not None and girth(self.best) != self.girth:
            raise AssertionError("stored girth disagrees with the witness")

    @property
    def empty(self) -> bool:
        return self.best is None

    def to_dict(self) -> dict:
        out = {
            "explored": self.explored,
            "girth": self.girth,
            "mode": self.mode,
            "perms": [list(p.labels) for p in self.best.perms] if self.best else [],
            "spec": self.spec.as_lists() if self.spec else None,
        }
        if self.metadata:
            out["metadata"] = self.metadata
        return out


# --------------------------------------------------------------------------
# candidate generators


def _extend(perms: list[Permutation], constraints: Sequence[Optional[Partition]]) -> Iterator[list[Permutation]]:
    if not constraints:
        yield list(perms)
        return
    for q in enumerate_compatible(perms, constraints[0]):
        perms.append(q)
        yield from _extend(perms, constraints[1:])
        perms.pop()


def _canonical_columns(target: UnorderedLabeledPartition) -> bool:
    # equal-size target components must appear in order of their smallest label
    subs = target.subsets
    for a, b in zip(subs, subs[1:]):
        if len(a) == len(b) and a[0] > b[0]:
            return False
    return True


def _stage_children(
    perms: list[Permutation],
    source: UnorderedLabeledPartition,
    betas: Sequence[Partition],
    stage: int,
) -> Iterator[list[Permutation]]:
    """Permutations for stages ``stage..`` via micro-partitions, label
    mappings and restricted cycle orders. ``source`` holds the cycles of
    the previous stage in component order."""
    if stage == len(betas):
        yield list(perms)
        return
    for micro in enumerate_micropartitions(betas[stage - 1], betas[stage]):
        yield from _micro_children(perms, source, betas, stage, micro)


def _micro_children(perms, source, betas, stage, micro) -> Iterator[list[Permutation]]:
    for target in enumerate_label_mappings(micro, source):
        if not _canonical_columns(target):
            continue
        for order in enumerate_cycle_orders(target, perms, restricted=True):
            q = assemble_permutation(perms[-1], order)
            perms.append(q)
            yield from _stage_children(perms, target, betas, stage + 1)
            perms.pop()


def _psi_start(beta1: Partition) -> tuple[list[Permutation], UnorderedLabeledPartition]:
    p1, p2 = psi(beta1).perms
    blocks = []
    start = 0
    for q in beta1.parts:
        blocks.append(tuple(range(start + 1, start + q + 1)))
        start += q
    return [p1, p2], UnorderedLabeledPartition(blocks)


def iter_pipeline(spec: PartitionFamilySpec) -> Iterator[Btu]:
    """Every BTU the micro-partition pipeline builds for ``spec``, in
    emission order, duplicates removed."""
    for task in _pipeline_tasks(spec):
        yield from _branch(task)


def _pipeline_tasks(spec: PartitionFamilySpec) -> list[tuple]:
    betas = spec.betas
    if spec.r == 2:
        return [("pipeline-root", betas)]
    return [("pipeline", betas, i) for i in range(len(enumerate_micropartitions(betas[0], betas[1])))]


def _alpha_tasks(m: int, r: int, constraints: Sequence[Optional[Partition]]) -> list[tuple]:
    ident = Permutation.identity(m)
    return [("alpha", tuple(constraints), p2.labels) for p2 in enumerate_compatible([ident], constraints[0])]


def _branch(task: tuple) -> Iterator[Btu]:
    kind = task[0]
    seen: set[bytes] = set()

    def fresh(perms: list[Permutation]) -> Optional[Btu]:
        b = Btu(perms)
        fp = b.matrix().tobytes()
        if fp in seen:
            return None
        seen.add(fp)
        return b

    if kind == "alpha":
        _, constraints, p2 = task
        m = len(p2)
        start = [Permutation.identity(m), Permutation(p2)]
        for perms in _extend(start, constraints[1:]):
            yield Btu(perms)
    elif kind == "pipeline-root":
        perms, _ = _psi_start(task[1][0])
        yield Btu(perms)
    elif kind == "pipeline":
        _, betas, index = task
        perms, source = _psi_start(betas[0])
        micro = enumerate_micropartitions(betas[0], betas[1])[index]
        for full in _micro_children(perms, source, betas, 1, micro):
            b = fresh(full)
            if b is not None:
                yield b
    else:  # pragma: no cover
        raise ValueError(f"unknown task kind {kind!r}")


# --------------------------------------------------------------------------
# scanning and deterministic reduction


@dataclass
class _Record:
    count: int
    improvements: list[tuple[int, int, tuple[int, ...], int, int]]  # idx, girth, key, m, r


def _better(g: int, key: tuple, best_g: Optional[int], best_key: tuple) -> bool:
    return best_g is None or g > best_g or (g == best_g and key < best_key)


def _scan(task: tuple, cap: Optional[int], deadline: Optional[float]) -> _Record:
    count = 0
    best_g: Optional[int] = None
    best_key: tuple = ()
    imps = []
    for b in _branch(task):
        if cap is not None and count >= cap:
            break
        if deadline is not None and time.monotonic() > deadline:
            break
        g = girth(b)
        key = b.rank_key()
        if _better(g, key, best_g, best_key):
            best_g, best_key = g, key
            imps.append((count, g, key, b.m, b.r))
        count += 1
    return _Record(count, imps)


def _scan_star(args) -> _Record:
    return _scan(*args)


def _run(tasks: list[tuple], budget: SearchBudget) -> tuple[Optional[Btu], Optional[int], int, tuple]:
    cap = budget.max_candidates
    deadline = time.monotonic() + budget.max_seconds if budget.max_seconds is not None else None
    best_g: Optional[int] = None
    best_key: tuple = ()
    best_shape = None
    explored = 0

    def absorb(rec: _Record, remaining: Optional[int]):
        nonlocal best_g, best_key, best_shape, explored
        for idx, g, key, m, r in rec.improvements:
            if remaining is not None and idx >= remaining:
                break
            if _better(g, key, best_g, best_key):
                best_g, best_key, best_shape = g, key, (m, r)
        explored += rec.count if remaining is None else min(rec.count, remaining)

    if budget.parallel_width > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=budget.parallel_width) as pool:
            records = list(pool.map(_scan_star, [(t, cap, deadline) for t in tasks], chunksize=1))
        for rec in records:
            remaining = None if cap is None else cap - explored
            if remaining is not None and remaining <= 0:
                break
            absorb(rec, remaining)
    else:
        for t in tasks:
            remaining = None if cap is None else cap - explored
            if remaining is not None and remaining <= 0:
                break
            if deadline is not None and time.monotonic() > deadline:
                break
            absorb(_scan(t, remaining, deadline), remaining)

    best = None
    if best_shape is not None:
        m, r = best_shape
        best = Btu([best_key[i * m:(i + 1) * m] for i in range(r)])
    return best, best_g, explored, best_key


# --------------------------------------------------------------------------
# public drivers

_UNLIMITED = SearchBudget()


def algorithm_alpha(m: int, r: int, budget: SearchBudget = _UNLIMITED) -> SearchResult:
    """Best girth over all tree-ordered compatible tuples with p1 = identity."""
    if m < 2 or r < 2:
        raise DomainError("need m >= 2 and r >= 2")
    if r > m:
        raise DomainError(f"no (m={m}, r={r}) BTU: first-column labels run out")
    best, g, explored, key = _run(_alpha_tasks(m, r, [None] * (r - 1)), budget)
    return SearchResult(best, g, explored, key, mode="alpha")


def algorithm_alpha1(spec: PartitionFamilySpec, budget: SearchBudget = _UNLIMITED) -> SearchResult:
    """Best girth over tuples whose consecutive partitions follow ``spec``."""
    best, g, explored, key = _run(_alpha_tasks(spec.m, spec.r, list(spec.betas)), budget)
    return SearchResult(best, g, explored, key, mode="alpha1", spec=spec)


def pipeline_search(spec: PartitionFamilySpec, budget: SearchBudget = _UNLIMITED) -> SearchResult:
    """Best girth over the BTUs built by micro-partitions, label mappings
    and restricted cycle orders, with p2 fixed to the block-shift
    construction of the first partition."""
    best, g, explored, key = _run(_pipeline_tasks(spec), budget)
    return SearchResult(best, g, explored, key, mode="pipeline", spec=spec)


def implicit_enumeration(m: int, r: int, budget: SearchBudget = _UNLIMITED) -> SearchResult:
    """Run the pipeline on every (r-1)-tuple of partitions; the budget
    applies to each family separately."""
    if m < 2 or r < 2:
        raise DomainError("need m >= 2 and r >= 2")
    census = []
    best: Optional[SearchResult] = None
    explored = 0
    for betas in product(enumerate_p2(m), repeat=r - 1):
        spec = PartitionFamilySpec(m, r, betas)
        res = pipeline_search(spec, budget)
        explored += res.explored
        census.append(CensusRow(tuple(betas), res.girth, res.explored))
        if res.best is not None and (
            best is None or _better(res.girth, res.witness_rank, best.girth, best.witness_rank)
        ):
            best = res
    if best is None:
        return SearchResult(None, None, explored, mode="implicit", census=census)
    return SearchResult(
        best.best, best.girth, explored, best.witness_rank, mode="implicit", spec=best.spec, census=census
    )


def hierarchy_search(m: int, r: int, budget: SearchBudget = _UNLIMITED) -> SearchResult:
    """Stage-wise search inside the optimal-partition family.

    Factorizes m = b * k^(r-1), fixes p1 = identity and p2 to the
    block-shift construction of beta_1, then picks each later permutation
    among the candidates satisfying its partition constraint, best partial
    girth first, backtracking while a branch can still beat the best
    complete BTU. Stops early once the upper bound 2u is reached.
    """
    k, b = factorize_m(m, r)
    if k < 2:
        log.warning("m=%d has no factor k>=2 with k^%d | m; falling back to implicit enumeration", m, r - 1)
        res = implicit_enumeration(m, r, budget)
        res.metadata = {"fallback": "implicit", "k": k, "b": b}
        res.mode = "hierarchy"
        return res
    betas = optimal_partitions(k, r, b)
    spec = PartitionFamilySpec(m, r, betas)
    target = girth_upper_bound(spec)
    deadline = time.monotonic() + budget.max_seconds if budget.max_seconds is not None else None
    cap = budget.max_candidates
    state = {"explored": 0, "best": None, "best_g": None, "stopped": False}

    def out_of_budget() -> bool:
        if cap is not None and state["explored"] >= cap:
            return True
        return deadline is not None and time.monotonic() > deadline

    def descend(perms: list[Permutation], stage: int):
        scored = []
        for q in enumerate_compatible(perms, betas[stage]):
            if out_of_budget():
                state["stopped"] = True
                break
            cand = Btu(perms + [q])
            scored.append((-girth(cand), q.labels, q))
            state["explored"] += 1
        scored.sort()
        for neg_g, _, q in scored:
            g = -neg_g
            if state["best_g"] is not None and g <= state["best_g"]:
                return
            if stage == len(betas) - 1:
                state["best"], state["best_g"] = Btu(perms + [q]), g
                if g >= target:
                    state["stopped"] = True
                    return
                continue
            perms.append(q)
            descend(perms, stage + 1)
            perms.pop()
            if state["stopped"]:
                return

    start, _ = _psi_start(betas[0])
    if r == 2:
        state["best"], state["best_g"], state["explored"] = Btu(start), girth(Btu(start)), 1
    else:
        descend(start, 1)
    best = state["best"]
    meta = {
        "k": k,
        "b": b,
        "stage_policy": "best-first per stage, backtrack while improvable",
        "target_bound": target,
        "reached_bound": state["best_g"] == target,
        "budget_exhausted": bool(state["stopped"] and state["best_g"] != target),
    }
    return SearchResult(
        best, state["best_g"], state["explored"], best.rank_key() if best else (),
        mode="hierarchy", spec=spec, metadata=meta,
    )


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("BTU_WORKERS", "1")))
    except ValueError:
        return 1
