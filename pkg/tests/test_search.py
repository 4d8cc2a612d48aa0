import pytest

from btu.errors import DomainError
from btu.oracle import brute_force_best_girth, canonical_form
from btu.partitions import Partition, PartitionFamilySpec, enumerate_p2
from btu.permutations import psi
from btu.search import (
    SearchBudget,
    algorithm_alpha,
    algorithm_alpha1,
    hierarchy_search,
    implicit_enumeration,
    iter_pipeline,
    pipeline_search,
)
from btu.tanner import Btu, girth, girth_upper_bound


def spec(*betas):
    return PartitionFamilySpec.from_betas([Partition(b) for b in betas])


def test_alpha_examples():
    res = algorithm_alpha(3, 2)
    assert res.girth == 6 and res.best == Btu(psi(Partition((3,))))
    assert algorithm_alpha(4, 2).girth == 8
    assert algorithm_alpha(4, 3).girth == brute_force_best_girth(4, 3)[0]


def test_alpha_rejects_r_above_m():
    with pytest.raises(DomainError):
        algorithm_alpha(3, 4)


def test_alpha1_examples():
    assert algorithm_alpha1(spec((4,))).girth == 8
    assert algorithm_alpha1(spec((2, 2))).girth == 4
    s = spec((2, 2), (4,))
    assert algorithm_alpha1(s).girth == pipeline_search(s).girth


def test_alpha1_empty_family():
    s = spec((2, 2), (2, 2), (4,))
    for res in (algorithm_alpha1(s), pipeline_search(s)):
        assert res.empty and res.girth is None
        assert res.to_dict()["perms"] == []


def test_pipeline_r2_single_class():
    for m in range(2, 7):
        res = pipeline_search(spec((m,)))
        assert res.girth == 2 * m
        forms = {canonical_form(b) for b in iter_pipeline(spec((m,)))} if m <= 5 else set()
        if m <= 5:
            assert len(forms) == 1


@pytest.mark.parametrize("m", [4, 5, 6])
def test_pipeline_matches_alpha1(m):
    for b1 in enumerate_p2(m):
        for b2 in enumerate_p2(m):
            s = spec(b1.parts, b2.parts)
            assert pipeline_search(s).girth == algorithm_alpha1(s).girth


def test_pipeline_girths_within_bound():
    s = spec((3, 2), (5,))
    bound = girth_upper_bound(s)
    for b in iter_pipeline(s):
        assert girth(b) <= bound


def test_search_result_dict_keys():
    d = pipeline_search(spec((2, 2), (4,))).to_dict()
    assert set(d) == {"explored", "girth", "mode", "perms", "spec"}


def test_implicit_family_counts():
    assert len(implicit_enumeration(4, 3).census) == 4
    res = implicit_enumeration(6, 3)
    assert len(res.census) == 16
    assert res.girth == algorithm_alpha(6, 3).girth
    assert res.census[0].beta_tuple == "6:6"


def test_hierarchy_specs():
    assert hierarchy_search(4, 3).spec.as_lists() == [[2, 2], [4]]
    res = hierarchy_search(9, 3)
    assert res.spec.as_lists() == [[3, 3, 3], [9]]
    assert res.girth <= 6 and res.metadata["target_bound"] == 6
    res = hierarchy_search(8, 4, SearchBudget(max_candidates=2000))
    assert res.spec.as_lists() == [[2, 2, 2, 2], [4, 4], [8]]


def test_hierarchy_fallback(caplog):
    res = hierarchy_search(5, 3)
    assert res.metadata["fallback"] == "implicit"
    assert "falling back" in caplog.text


def test_budget_prefix():
    full = algorithm_alpha(5, 3)
    part = algorithm_alpha(5, 3, SearchBudget(max_candidates=10))
    assert part.explored == 10 <= full.explored
    assert part.girth <= full.girth


@pytest.mark.parametrize("run", [
    lambda b: algorithm_alpha(5, 3, b),
    lambda b: pipeline_search(spec((3, 3), (6,)), b),
    lambda b: algorithm_alpha1(spec((2, 2, 2), (3, 3)), b),
])
def test_workers_do_not_change_result(run):
    one = run(SearchBudget(parallel_width=1))
    four = run(SearchBudget(parallel_width=4))
    assert one.to_dict() == four.to_dict()
    assert one.witness_rank == four.witness_rank


def test_budget_validation():
    with pytest.raises(DomainError):
        SearchBudget(parallel_width=0)
    with pytest.raises(DomainError):
        SearchBudget(max_candidates=-1)
