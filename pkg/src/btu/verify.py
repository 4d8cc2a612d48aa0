"""Verification suites that pit the library against the brute-force
oracles. Each suite returns a list of :class:`Check` rows; the CLI prints
them as a table and can render the collected series as figures."""

from __future__ import annotations

import random
from itertools import product
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Optional

from . import oracle
from .microparts import (
    MicroPartition,
    UnorderedLabeledPartition,
    count_label_mappings,
    enumerate_label_mappings,
    enumerate_micropartitions,
)
from .partitions import Partition, PartitionFamilySpec, enumerate_p2
from .permutations import Permutation, count_f, enumerate_compatible, psi
from .search import iter_pipeline
from .tanner import (
    Btu,
    girth,
    girth_upper_bound,
    micropartition_cycle_bound,
    puncture_bound,
    puncture_profile,
    three_one_girths,
)

SUITES = ("counting", "girth", "bounds", "iso")


@dataclass
class Check:
    suite: str
    name: str
    passed: Optional[bool]  # None: reported only
    detail: str = ""

    @property
    def status(self) -> str:
        return {True: "PASS", False: "FAIL", None: "INFO"}[self.passed]


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    series: dict[str, dict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed is not False for c in self.checks)


def random_btu(m: int, r: int, rng: random.Random) -> Btu:
    """Identity plus r-1 random permutations, each compatible with the
    previous ones (rejection sampling)."""
    perms = [tuple(range(1, m + 1))]
    while len(perms) < r:
        q = list(range(1, m + 1))
        rng.shuffle(q)
        if all(all(a != b for a, b in zip(q, p)) for p in perms):
            perms.append(tuple(q))
    return Btu(perms)


def source_partition(beta: Partition) -> UnorderedLabeledPartition:
    blocks, s = [], 0
    for q in beta.parts:
        blocks.append(range(s + 1, s + q + 1))
        s += q
    return UnorderedLabeledPartition(blocks)


def suite_counting(seed: int = 0, max_m: int = 7) -> SuiteReport:
    rep = SuiteReport("counting")
    ident = lambda m: [Permutation.identity(m)]  # noqa: E731
    ok = True
    for m in range(2, max_m + 1):
        n = sum(1 for _ in enumerate_compatible(ident(m), Partition([m])))
        ok &= n == factorial(m - 1) == oracle.brute_force_count_permutations([m])
    rep.checks.append(Check("counting", f"single-cycle count = (m-1)!, m<={max_m}", ok))

    formula, scan = {}, {}
    for m in range(2, max_m + 1):
        for beta in enumerate_p2(m):
            formula[str(beta)] = count_f(beta)
            scan[str(beta)] = oracle.brute_force_count_permutations(beta)
    agree = [k for k in formula if formula[k] == scan[k]]
    rep.checks.append(
        Check(
            "counting",
            "general f(beta) formula vs scan",
            None,
            f"agrees on {len(agree)}/{len(formula)}; (2,2): formula {formula['2,2']} vs scan {scan['2,2']}",
        )
    )
    rep.series["f_vs_scan"] = {"labels": list(formula), "formula": list(formula.values()), "scan": list(scan.values())}

    ok = True
    for m in range(2, max_m + 1):
        for bu in enumerate_p2(m):
            src = source_partition(bu)
            for bv in enumerate_p2(m):
                for micro in enumerate_micropartitions(bu, bv):
                    ok &= count_label_mappings(micro) == sum(1 for _ in enumerate_label_mappings(micro, src))
    rep.checks.append(Check("counting", f"binomial mapping count = enumeration, m<={max_m}", ok))
    return rep


def suite_girth(seed: int = 0, samples: int = 50) -> SuiteReport:
    rep = SuiteReport("girth")
    ok = True
    for m in range(2, 9):
        for beta in enumerate_p2(m):
            ok &= girth(Btu(psi(beta))) == 2 * min(beta.parts) == oracle.brute_force_girth(psi(beta))
    rep.checks.append(Check("girth", "known-cycle law on psi(beta), m<=8", ok))
    rng = random.Random(seed)
    fast, slow = [], []
    for _ in range(samples):
        b = random_btu(6, 3, rng)
        fast.append(girth(b))
        slow.append(oracle.brute_force_girth(b))
    rep.checks.append(Check("girth", f"BFS girth = walk enumeration on {samples} random (6,3)", fast == slow))
    rep.series["random_girths"] = {"fast": fast, "slow": slow}
    return rep


def suite_bounds(seed: int = 0, ks: range = range(4, 11)) -> SuiteReport:
    rep = SuiteReport("bounds")
    worst, best = {}, {}
    ok = True
    for k in ks:
        prof = puncture_profile(k)
        worst[k], best[k] = max(prof.values()), min(prof.values())
        ok &= 4 == best[k] and worst[k] <= puncture_bound(k)
    rep.checks.append(Check("bounds", f"puncture 4 <= l <= bound, k in {ks.start}..{ks.stop - 1}", ok))
    rep.series["puncture"] = {"k": list(ks), "max_l": [worst[k] for k in ks], "bound": [puncture_bound(k) for k in ks]}

    for k in (3, 4):
        gs = three_one_girths(k)
        bad = sum(1 for g in gs.values() if g >= 2 * k)
        rep.checks.append(
            Check("bounds", f"three extra cross-block ones give girth < {2 * k} (k={k})", bad == 0,
                  f"{bad}/{len(gs)} placements reach {2 * k}")
        )

    ok = True
    for k in range(2, 7):
        mp1 = MicroPartition(((k,) * k,), (k * k,), (k,) * k)
        mp2 = MicroPartition(tuple((k,) for _ in range(k)), (k,) * k, (k * k,))
        ok &= micropartition_cycle_bound(Partition([k * k]), Partition([k] * k), mp1, 1) == 2 * k
        ok &= micropartition_cycle_bound(Partition([k] * k), Partition([k * k]), mp2, k) == 2 * k
    rep.checks.append(Check("bounds", "micro-partition cycle bound = 2k, k in 2..6", ok))

    ok = True
    for m in range(3, 6):
        for betas in product(enumerate_p2(m), repeat=2):
            spec = PartitionFamilySpec(m, 3, betas)
            ub = girth_upper_bound(spec)
            ok &= all(girth(b) <= ub for b in iter_pipeline(spec))
    rep.checks.append(Check("bounds", "pipeline BTUs satisfy girth <= 2u, m<=5, r=3", ok))
    return rep


def suite_iso(seed: int = 0) -> SuiteReport:
    rep = SuiteReport("iso")
    forms = {oracle.canonical_form([Permutation.identity(4), q]) for q in enumerate_compatible([Permutation.identity(4)])}
    rep.checks.append(Check("iso", "(4,2) BTUs fall into |P2(4)| = 2 classes", len(forms) == 2, f"{len(forms)} classes"))
    ok = True
    for m in range(2, 6):
        classes = {oracle.canonical_form([Permutation.identity(m), q]) for q in enumerate_compatible([Permutation.identity(m)])}
        ok &= len(classes) == len(enumerate_p2(m))
    rep.checks.append(Check("iso", "(m,2) classes = |P2(m)|, m<=5", ok))
    return rep


RUNNERS: dict[str, Callable[..., SuiteReport]] = {
    "counting": suite_counting,
    "girth": suite_girth,
    "bounds": suite_bounds,
    "iso": suite_iso,
}


def run_suite(name: str, seed: int = 0) -> SuiteReport:
    return RUNNERS[name](seed=seed)


def format_table(reports: list[SuiteReport]) -> str:
    rows = [(c.suite, c.status, c.name, c.detail) for rep in reports for c in rep.checks]
    w0 = max(len("suite"), *(len(r[0]) for r in rows))
    w2 = max(len("check"), *(len(r[2]) for r in rows))
    out = [f"{'suite':<{w0}}  status  {'check':<{w2}}  detail"]
    out += [f"{s:<{w0}}  {st:<6}  {n:<{w2}}  {d}".rstrip() for s, st, n, d in rows]
    return "\n".join(out) + "\n"
