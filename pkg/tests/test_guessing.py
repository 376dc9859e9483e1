import random
import warnings
from fractions import Fraction

import pytest

from dynsubmod.errors import PreconditionError
from dynsubmod.guessing import (MAX_MODE, OPT_MODE, DynamicSolver, RoutingClampWarning,
                                max_route_width, route)
from dynsubmod.oracles import CoverageOracle, CoverageSpec, ModularOracle, UniformMatroid


def test_route_examples():
    assert route(1, OPT_MODE, 2, 1) == (0, 2)
    assert route(1, MAX_MODE, 1, 1) == (0, 3)


def test_zero_value_routed_nowhere():
    assert route(0, OPT_MODE, 2, 1) is None


def test_clamp_warns():
    with pytest.warns(RoutingClampWarning):
        assert route(2**40, MAX_MODE, 1, 1, clamp=(0, 10)) is None
    with pytest.warns(RoutingClampWarning):
        assert route(2**9, MAX_MODE, 1, 1, clamp=(0, 10)) == (9, 10)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        route(1, MAX_MODE, 1, 1, clamp=(0, 10))


@pytest.mark.parametrize("mode", [OPT_MODE, MAX_MODE])
@pytest.mark.parametrize("k", [1, 2, 5])
@pytest.mark.parametrize("eps", [Fraction(1, 4), Fraction(1, 2), 1])
def test_route_matches_definition(mode, k, eps):
    base = 1 + Fraction(eps) if mode == OPT_MODE else Fraction(2)
    rng = random.Random(f"{mode}{k}{eps}")
    for _ in range(60):
        value = Fraction(rng.randint(1, 5000), rng.randint(1, 50))
        lo, hi = route(value, mode, k, eps)
        assert hi - lo + 1 <= max_route_width(mode, k, eps)
        for i in range(lo - 3, hi + 4):
            g = base ** i
            low = g / (2 * k) if mode == OPT_MODE else Fraction(eps) * g / (10 * k)
            assert (lo <= i <= hi) == (low <= value <= g)


def test_width_formulas():
    assert max_route_width(OPT_MODE, 2, 1) == 3
    assert max_route_width(MAX_MODE, 1, 1) == 5


def _solver(values, **kw):
    return DynamicSolver(ModularOracle(values), "cardinality", 1, k=2, seed=0, **kw)


def test_insert_delete_touch_same_indices():
    s = _solver({0: 5, 1: 7})
    assert s.insert(0) == s.delete(0)


def test_singleton_value_billed_once_per_insert():
    s = _solver({0: 0})
    s.insert(0)
    assert s.update_queries() == 1
    s.delete(0)
    assert s.update_queries() == 1


def test_preconditions():
    s = _solver({0: 5})
    s.insert(0)
    with pytest.raises(PreconditionError):
        s.insert(0)
    with pytest.raises(PreconditionError):
        s.delete(1)


def test_empty_solution():
    sol = _solver({0: 5}).solution()
    assert sol.elements == frozenset() and sol.value == 0 and sol.index is None


def test_single_instance_solution():
    s = _solver({0: 1})
    s.insert(0)
    sol = s.solution()
    assert len(s.family.instances) == 3
    assert sol.elements == {0} and sol.value == 1


def test_live_instances_bounded_for_wide_values():
    f = CoverageOracle(CoverageSpec(2**20, {e: range(2**e) for e in range(21)}))
    s = DynamicSolver(f, "cardinality", 1, k=2, seed=0)
    for e in range(21):
        s.insert(e)
    assert len(s.family.instances) <= 20 + max_route_width(OPT_MODE, 2, 1)


def test_counters_are_sums_over_instances():
    s = DynamicSolver(ModularOracle({e: e + 1 for e in range(12)}), "matroid", 1,
                      matroid=UniformMatroid(3), seed=2)
    for e in range(12):
        s.insert(e)
    for e in range(0, 12, 3):
        s.delete(e)
    s.check_invariants()
    insts = s.family.instances.values()
    assert s.update_queries() == s.route_f.queries + s.family.retired["update"] + sum(
        i.update_queries() for i in insts)
    assert s.audit_queries() == s.family.retired["audit"] + sum(i.audit_queries() for i in insts)


def test_initialize_matches_invariants():
    f = ModularOracle({e: (e % 5) + 1 for e in range(20)})
    s = DynamicSolver(f, "cardinality", Fraction(1, 2), k=3, seed=1)
    s.initialize(range(20))
    assert all(r.ok for r in s.check_invariants().values())
    with pytest.raises(PreconditionError):
        s.initialize([1])


def test_empty_instances_are_dropped():
    s = _solver({0: 5})
    s.insert(0)
    s.delete(0)
    assert not s.family.instances


def test_same_seed_same_solutions():
    f = ModularOracle({e: e % 7 + 1 for e in range(15)})
    runs = []
    for _ in range(2):
        s = DynamicSolver(f, "cardinality", 1, k=3, seed=9)
        trace = []
        for e in range(15):
            s.insert(e)
            trace.append(s.solution().elements)
        runs.append(trace)
    assert runs[0] == runs[1]
