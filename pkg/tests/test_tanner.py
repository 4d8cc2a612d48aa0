import json
import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from btu.errors import DomainError
from btu.microparts import MicroPartition
from btu.oracle import brute_force_girth
from btu.partitions import Partition, PartitionFamilySpec, enumerate_p2
from btu.permutations import Permutation, psi
from btu.tanner import (
    Btu,
    all_pair_partitions,
    circular_distance,
    crossblock_decompose,
    cycle_report,
    export,
    girth,
    girth_upper_bound,
    known_cycles,
    micropartition_cycle_bound,
    min_interaction_cycle,
    parse_alist,
    puncture,
    puncture_bound,
    puncture_profile,
    three_one_girths,
)
from btu.verify import random_btu


def shifts(m, *ss):
    return Btu([Permutation.shift(m, s) for s in ss])


def nx_girth(b):
    g = nx.Graph()
    for p in b.perms:
        g.add_edges_from((("d", d), ("x", x)) for d, x in enumerate(p.labels))
    return nx.girth(g)


def test_matrix_orientation():
    b = Btu([(1, 2, 3), (2, 3, 1)])
    h = b.matrix()
    assert h.dtype == np.uint8
    assert h.tolist() == [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert (h.sum(axis=0) == 2).all() and (h.sum(axis=1) == 2).all()


def test_btu_rejects_collisions():
    with pytest.raises(DomainError):
        Btu([(1, 2, 3), (1, 3, 2)])


def test_girth_examples():
    assert girth(Btu(psi(Partition((4,))))) == 8
    assert girth(Btu(psi(Partition((2, 2))))) == 4
    b = shifts(4, 0, 1, 2)
    assert girth(b) == brute_force_girth(b)
    assert girth(Btu([(1, 2, 3)])) is None


def test_known_cycles_examples():
    assert known_cycles(Btu(psi(Partition((4, 3))))) == [6, 8]
    for m in range(2, 8):
        assert known_cycles(Btu(psi(Partition((m,))))) == [2 * m]


@pytest.mark.parametrize("m", range(2, 9))
def test_r2_girth_is_min_known_cycle(m):
    for beta in enumerate_p2(m):
        b = Btu(psi(beta))
        assert girth(b) == min(known_cycles(b)) == 2 * min(beta.parts)


def test_all_pair_partitions():
    assert all_pair_partitions(Btu(psi(Partition((3, 2))))) == {(1, 2): Partition((3, 2))}
    pairs = all_pair_partitions(shifts(5, 0, 1, 2))
    assert len(pairs) == 3 and pairs[(1, 3)] == Partition((5,))


def test_girth_upper_bound():
    spec = PartitionFamilySpec.from_betas
    assert girth_upper_bound(spec([Partition((2, 2)), Partition((4,))])) == 4
    assert girth_upper_bound(spec([Partition((3, 3, 3)), Partition((9,))])) == 6
    assert girth_upper_bound(spec([Partition((7,))])) == 14


def test_girth_matches_oracles_random(rng):
    for _ in range(40):
        m = rng.randint(3, 7)
        r = rng.randint(2, 3)
        b = random_btu(m, r, rng)
        g = girth(b)
        assert g % 2 == 0 and g >= 4
        assert g == brute_force_girth(b) == nx_girth(b)


@settings(max_examples=40, deadline=None)
@given(st.integers(5, 20), st.integers(0, 2**32))
def test_girth_matches_networkx(m, seed):
    b = random_btu(m, 3, random.Random(seed))
    assert girth(b) == nx_girth(b)


def test_micro_bound_values():
    for k in range(2, 7):
        big, row = Partition((k * k,)), Partition([k] * k)
        assert micropartition_cycle_bound(big, row, MicroPartition.of([[k] * k]), 1) == 2 * k
        micro = MicroPartition.of([[k]] * k)
        assert micropartition_cycle_bound(row, big, micro, k) == 2 * k
    micro = MicroPartition.of([[2, 2]])
    assert micropartition_cycle_bound(Partition((4,)), Partition((2, 2)), micro, 1) == 4


def test_micro_bound_sentinel_and_checks():
    micro = MicroPartition.of([[1, 1], [1, 1]])
    assert micropartition_cycle_bound(Partition((2, 2)), Partition((2, 2)), micro, 1) is None
    with pytest.raises(DomainError):
        micropartition_cycle_bound(Partition((2, 2)), Partition((2, 2)), micro, 3)


def test_circular_distance():
    assert circular_distance(1, 1, 5) == 0
    assert circular_distance(1, 4, 5) == 2
    assert circular_distance(2, 5, 6) == 3


def test_puncture_examples():
    assert set(puncture_profile(4).values()) == {4}
    b = Btu(psi(Partition((6,))))
    assert puncture(b, (0, 3)) == 6  # chord splitting the 12-cycle into 6 + 8
    with pytest.raises(DomainError):
        puncture(b, (0, 0))


@pytest.mark.parametrize("k", range(4, 11))
def test_puncture_bounds(k):
    values = puncture_profile(k).values()
    assert min(values) == 4
    assert max(values) <= puncture_bound(k)
    assert max(values) == puncture_bound(k)


def test_crossblock():
    view = crossblock_decompose(Btu(psi(Partition((3, 3)))), 3)
    assert len(view.sub_blocks) == 2
    assert not view.cross_blocks[(1, 2)].any() and not view.cross_blocks[(2, 1)].any()
    assert view.ones() == 2 * 6
    view = crossblock_decompose(Btu(psi(Partition((3, 3, 3)))), 3)
    assert len(view.sub_blocks) == 3 and len(view.cross_blocks) == 6
    assert not any(b.any() for b in view.cross_blocks.values())
    with pytest.raises(DomainError):
        crossblock_decompose(Btu(psi(Partition((5,)))), 2)


def test_three_one_k4_below_2k():
    out = three_one_girths(4)
    assert len(out) == 4960
    assert max(out.values()) < 8


def test_three_one_k3_counterexample():
    # the strict bound does not hold at k = 3: these ones leave girth 6 = 2k
    out = three_one_girths(3)
    assert out[((0, 4), (1, 5), (2, 3))] <= 6
    assert max(out.values()) == 6


def test_min_interaction_cycle():
    assert min_interaction_cycle(Btu(psi(Partition((4,))))) is None
    b = shifts(5, 0, 1, 2)
    c = min_interaction_cycle(b)
    assert c is not None and c >= girth(b)
    assert min_interaction_cycle(shifts(11, 0, 1, 2)) is None  # above the size cap


def test_cycle_report():
    b = shifts(6, 0, 1, 3)
    rep = cycle_report(b)
    assert rep.girth == girth(b)
    assert rep.girth <= min(rep.known_cycles)
    d = rep.to_dict()
    assert set(d["pair_partitions"]) == {"1,2", "1,3", "2,3"}
    json.dumps(d)


def test_export_formats():
    b = Btu(psi(Partition((2,))))
    assert export(b, "json") == '{"m":2,"r":2,"perms":[[1,2],[2,1]]}\n'
    b = shifts(5, 0, 1, 3)
    assert (parse_alist(export(b, "alist")) == b.matrix()).all()
    dot = export(b, "dot")
    assert dot.count("shape=") == 10 and dot.count(" -- ") == 15
    with pytest.raises(DomainError):
        export(b, "png")


def test_parse_alist_rejects_garbage():
    with pytest.raises(DomainError):
        parse_alist("3\n")


def test_btu_dict_round_trip():
    b = shifts(5, 0, 2)
    assert Btu.from_dict(b.to_dict()) == b
    with pytest.raises(DomainError):
        Btu.from_dict({"m": 4, "perms": b.to_dict()["perms"]})
