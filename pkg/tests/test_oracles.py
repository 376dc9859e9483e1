import itertools
import json

import pytest
from hypothesis import given, settings, strategies as st

from dynsubmod.errors import DomainError, PreconditionError, SpecError
from dynsubmod.oracles import (CoverageOracle, CoverageSpec, GraphicMatroid, ModularOracle,
                               PartitionMatroid, UniformMatroid, load_oracle_spec,
                               make_coverage_oracle, make_matroid)


def subsets(ground):
    ground = sorted(ground)
    for r in range(len(ground) + 1):
        yield from (frozenset(c) for c in itertools.combinations(ground, r))


def test_empty_set_is_zero(abc_coverage):
    assert abc_coverage.evaluate(set()) == 0
    assert ModularOracle({1: 3}).evaluate(()) == 0


def test_coverage_union(abc_coverage):
    assert abc_coverage.evaluate({1, 2}) == 3
    assert abc_coverage.marginal_gain({1}, 2) == 1


def test_modular_singleton():
    assert ModularOracle({7: 5}).evaluate({7}) == 5


def test_marginal_on_empty_equals_singleton(abc_coverage):
    assert abc_coverage.marginal_gain(set(), 1) == abc_coverage.evaluate({1})


def test_marginal_gain_query_cost(abc_coverage):
    h = abc_coverage.handle()
    h.marginal_gain({1}, 2)
    assert h.queries == 2
    h.marginal_gain({1}, 2, f_S=2)
    assert h.queries == 3
    assert abc_coverage.queries == 0


def test_marginal_gain_rejects_member(abc_coverage):
    with pytest.raises(PreconditionError):
        abc_coverage.marginal_gain({1, 2}, 1)


def test_unknown_element(abc_coverage):
    with pytest.raises(DomainError):
        abc_coverage.evaluate({99})
    with pytest.raises(DomainError):
        UniformMatroid(2, ground=[1, 2]).is_independent({3})


def test_negative_item_weight_rejected():
    with pytest.raises(SpecError):
        CoverageSpec(2, {0: {0}}, item_weights=[1, -1])


def test_coverage_degenerate_shapes():
    empty = make_coverage_oracle(CoverageSpec(3, {e: set() for e in range(4)}))
    assert all(empty.evaluate(S) == 0 for S in subsets(range(4)))
    full = make_coverage_oracle(CoverageSpec(1, {e: {0} for e in range(4)}))
    assert all(full.evaluate(S) == (1 if S else 0) for S in subsets(range(4)))
    disjoint = make_coverage_oracle(CoverageSpec(4, {e: {e} for e in range(4)}))
    assert all(disjoint.evaluate(S) == len(S) for S in subsets(range(4)))


def test_weighted_coverage():
    f = CoverageOracle(CoverageSpec(3, {0: {0, 1}, 1: {1, 2}}, item_weights=[1, 2, 4]))
    assert f.evaluate({0}) == 3
    assert f.evaluate({0, 1}) == 7


def test_matroid_examples():
    for M in (UniformMatroid(2), PartitionMatroid([[0, 1], [2]], [1, 1]),
              GraphicMatroid([[0, 1, 0], [1, 2, 1], [2, 0, 2]])):
        assert M.is_independent(set())
    assert not UniformMatroid(2).is_independent({0, 1, 2})
    assert UniformMatroid(3).is_independent({0, 1, 2})
    assert not UniformMatroid(3).is_independent({0, 1, 2, 3})
    assert not PartitionMatroid([[0, 1], [2]], [1, 1]).is_independent({0, 1})
    triangle = GraphicMatroid([[0, 1, 0], [1, 2, 1], [2, 0, 2]])
    assert not triangle.is_independent({0, 1, 2})
    path = GraphicMatroid([["a", "b", 0], ["b", "c", 1]])
    assert path.is_independent({0, 1})


def test_graphic_self_loop_and_parallel():
    M = GraphicMatroid([[0, 0, 0], [0, 1, 1], [1, 0, 2]])
    assert not M.is_independent({0})
    assert not M.is_independent({1, 2})
    assert M.rank == 1


@pytest.mark.parametrize("bad", [
    ("partition", {"blocks": [[0, 1], [1]], "capacities": [1, 1]}),
    ("partition", {"blocks": [[0]], "capacities": [1, 2]}),
    ("graphic", {"edges": [[0, 1]]}),
    ("graphic", {"edges": [[0, 1, 5], [1, 2, 5]]}),
    ("uniform", {}),
    ("cubic", {"k": 1}),
])
def test_malformed_matroid_specs(bad):
    with pytest.raises(SpecError):
        make_matroid(bad[0], **bad[1])


def test_independence_counter_is_exact():
    M = UniformMatroid(2)
    h = M.handle()
    tally = 0
    for S in subsets(range(5)):
        h.is_independent(S)
        tally += 1
    assert h.queries == tally and M.queries == 0


def test_load_oracle_spec_layouts(tmp_path):
    fn = {"type": "coverage", "universe": 3, "covers": {"1": [0, 1], "2": [1, 2]}}
    mat = {"type": "uniform", "k": 1}
    p = tmp_path / "o.json"
    p.write_text(json.dumps({"function": fn, "matroid": mat}))
    for src in (str(p), {"function": fn, "matroid": mat}, [fn, mat]):
        b = load_oracle_spec(src)
        assert b.f.evaluate({1, 2}) == 3
        assert b.matroid.rank == 1
    assert load_oracle_spec(fn).matroid is None
    with pytest.raises(SpecError):
        load_oracle_spec(mat)
    with pytest.raises(SpecError):
        load_oracle_spec({"function": fn, "matroid": {"type": "partition", "blocks": [[1]], "capacities": [1]}})


# -- exhaustive axioms on small ground sets ------------------------------------------

covers_st = st.dictionaries(st.integers(0, 5), st.frozensets(st.integers(0, 6), max_size=4),
                            min_size=1, max_size=6)


@settings(max_examples=40, deadline=None)
@given(covers_st, st.lists(st.integers(0, 5), min_size=7, max_size=7))
def test_coverage_is_normalized_monotone_submodular(covers, weights):
    f = CoverageOracle(CoverageSpec(7, covers, item_weights=weights))
    ground = sorted(covers)
    value = {S: f.evaluate(S) for S in subsets(ground)}
    assert value[frozenset()] == 0
    for B in value:
        for A in subsets(B):
            assert value[A] <= value[B]
            for e in ground:
                if e not in B:
                    assert value[A | {e}] - value[A] >= value[B | {e}] - value[B]


def _check_matroid_axioms(M, ground):
    indep = {S for S in subsets(ground) if M.is_independent(S)}
    assert frozenset() in indep
    for S in indep:
        assert all(T in indep for T in subsets(S))
    for A in indep:
        for B in indep:
            if len(A) < len(B):
                assert any(A | {x} in indep for x in B - A)
    assert max(len(S) for S in indep) == M.rank


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=6))
def test_graphic_matroid_axioms(pairs):
    M = GraphicMatroid([[u, v, i] for i, (u, v) in enumerate(pairs)])
    _check_matroid_axioms(M, range(len(pairs)))


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=6), st.lists(st.integers(0, 3), min_size=3, max_size=3))
def test_partition_matroid_axioms(block_of, caps):
    blocks = [[e for e, b in enumerate(block_of) if b == j] for j in range(3)]
    M = PartitionMatroid(blocks, caps)
    _check_matroid_axioms(M, range(len(block_of)))


@pytest.mark.parametrize("k", [1, 2, 3])
def test_uniform_matroid_axioms(k):
    _check_matroid_axioms(UniformMatroid(k, ground=range(6)), range(6))
