from functools import lru_cache

import pytest
from hypothesis import given, settings, strategies as st

from btu.errors import DomainError
from btu.microparts import (
    MicroPartition,
    OrderedLabeledPartition,
    UnorderedLabeledPartition,
    assemble_permutation,
    count_label_mappings,
    decompose,
    enumerate_cycle_orders,
    enumerate_label_mappings,
    enumerate_micropartitions,
    stage_micropartition,
)
from btu.partitions import Partition, enumerate_p2
from btu.permutations import Permutation, enumerate_compatible, is_compatible, partition_between, psi
from btu.verify import source_partition


def count_tables(rows, cols):
    # independent recursion: fill one row at a time, memoized on leftover column sums
    @lru_cache(maxsize=None)
    def rec(i, cols):
        if i == len(rows):
            return int(not any(cols))
        return sum(rec(i + 1, rest) for rest in splits(rows[i], cols))

    def splits(total, cols):
        if not cols:
            if total == 0:
                yield ()
            return
        for x in range(min(total, cols[0]) + 1):
            for tail in splits(total - x, cols[1:]):
                yield (cols[0] - x,) + tail

    return rec(0, tuple(cols))


def brute_tables(rows, cols):
    # plain exhaustive count for small shapes
    from itertools import product
    n = 0
    for cells in product(*(range(min(r, c) + 1) for r in rows for c in cols)):
        grid = [cells[i * len(cols):(i + 1) * len(cols)] for i in range(len(rows))]
        if all(sum(g) == r for g, r in zip(grid, rows)) and \
                all(sum(g[j] for g in grid) == c for j, c in enumerate(cols)):
            n += 1
    return n


def test_micro_example():
    got = enumerate_micropartitions(Partition((2, 2)), Partition((4,)))
    assert [m.cells for m in got] == [((2,), (2,))]
    got = enumerate_micropartitions(Partition((4,)), Partition((2, 2)))
    assert [m.cells for m in got] == [((2, 2),)]
    got = enumerate_micropartitions(Partition((3, 3)), Partition((3, 3)))
    assert [m.cells for m in got] == [((3, 0), (0, 3)), ((2, 1), (1, 2)), ((1, 2), (2, 1)), ((0, 3), (3, 0))]


def test_micro_margin_checks():
    with pytest.raises(DomainError):
        MicroPartition(((2, 1),), (2,), (2, 1))
    assert MicroPartition.of([[1, 1], [1, 1]]).row_margins == (2, 2)


@pytest.mark.parametrize("m", range(2, 10))
def test_micro_count_matches_recursive_counter(m):
    parts = enumerate_p2(m)
    for bu in parts:
        for bv in parts:
            got = enumerate_micropartitions(bu, bv)
            assert len(got) == count_tables(bu.parts, bv.parts)
            assert len(set(got)) == len(got)
            if m <= 6:
                assert len(got) == brute_tables(bu.parts, bv.parts)


@pytest.mark.parametrize("m", range(2, 9))
def test_label_mapping_count(m):
    parts = enumerate_p2(m)
    for bu in parts:
        src = source_partition(bu)
        for bv in parts:
            for micro in enumerate_micropartitions(bu, bv):
                got = list(enumerate_label_mappings(micro, src))
                assert len(got) == count_label_mappings(micro)
                for t in got:
                    assert t.sizes == bv.parts
                    assert stage_micropartition(src, t) == micro


def test_label_mapping_example():
    micro = MicroPartition.of([[1, 1], [1, 1]])
    assert count_label_mappings(micro) == 4
    src = UnorderedLabeledPartition([(1, 2), (3, 4)])
    got = {t.subsets for t in enumerate_label_mappings(micro, src)}
    assert ((1, 3), (2, 4)) in got and len(got) == 4


def test_labeled_partition_validation():
    with pytest.raises(DomainError):
        UnorderedLabeledPartition([(1,), (2, 3)])
    with pytest.raises(DomainError):
        UnorderedLabeledPartition([(1, 2), (2, 3)])
    o = OrderedLabeledPartition([(3, 1, 2)])
    assert o.canonical().subsets == ((1, 2, 3),) and not o.is_canonical()


def test_rotations_give_same_permutation():
    prev = Permutation.identity(3)
    a = assemble_permutation(prev, OrderedLabeledPartition([(1, 2, 3)]))
    b = assemble_permutation(prev, OrderedLabeledPartition([(2, 3, 1)]))
    assert a == b


def test_unrestricted_emits_all_rotations():
    ctx = [Permutation.identity(4)]
    target = UnorderedLabeledPartition([(1, 2, 3, 4)])
    restricted = list(enumerate_cycle_orders(target, ctx))
    full = list(enumerate_cycle_orders(target, ctx, restricted=False))
    assert len(restricted) == 6 and len(full) == 24
    assert {assemble_permutation(ctx[0], o) for o in full} == {assemble_permutation(ctx[0], o) for o in restricted}


def test_restricted_needs_identity_first():
    ctx = [Permutation((2, 1, 4, 3))]
    with pytest.raises(DomainError):
        list(enumerate_cycle_orders(UnorderedLabeledPartition([(1, 2, 3, 4)]), ctx))


def _all_targets(beta):
    whole = UnorderedLabeledPartition([tuple(range(1, beta.m + 1))])
    micro = MicroPartition((beta.parts,), (beta.m,), beta.parts)
    seen = {}
    for t in enumerate_label_mappings(micro, whole):
        seen.setdefault(t.key(), t)
    return list(seen.values())


@pytest.mark.parametrize("m", range(2, 8))
def test_pipeline_complete_at_r2(m):
    ident = Permutation.identity(m)
    for beta in enumerate_p2(m):
        built = []
        for target in _all_targets(beta):
            for order in enumerate_cycle_orders(target, [ident]):
                built.append(assemble_permutation(ident, order))
        want = set(enumerate_compatible([ident], beta))
        assert len(built) == len(set(built)) == len(want)
        assert set(built) == want


def test_assembled_perms_compatible_with_context():
    ctx = list(psi(Partition((3, 3))))
    src = source_partition(Partition((3, 3)))
    n = 0
    for micro in enumerate_micropartitions(Partition((3, 3)), Partition((2, 2, 2))):
        for target in enumerate_label_mappings(micro, src):
            for order in enumerate_cycle_orders(target, ctx):
                q = assemble_permutation(ctx[-1], order)
                assert all(is_compatible(p, q) for p in ctx)
                assert partition_between(ctx[-1], q) == Partition((2, 2, 2))
                n += 1
    assert n > 0


@settings(max_examples=60)
@given(st.permutations(list(range(1, 8))))
def test_decompose_round_trip(labels):
    prev = Permutation((3, 1, 2, 7, 5, 4, 6))
    q = Permutation(labels)
    if is_compatible(prev, q):
        assert assemble_permutation(prev, decompose(prev, q)) == q
