import random
from collections import Counter

from hypothesis import given, strategies as st

from dynsubmod.randomset import RandomSet


@given(st.lists(st.tuples(st.booleans(), st.integers(0, 20)), max_size=80))
def test_matches_builtin_set(ops):
    rs, ref = RandomSet(), set()
    for add, x in ops:
        if add:
            assert rs.add(x) == (x not in ref)
            ref.add(x)
        else:
            assert rs.discard(x) == (x in ref)
            ref.discard(x)
        assert rs == ref and len(rs) == len(ref)
        assert all(x in rs for x in ref)


def test_permuted_is_a_permutation_even_under_mutation():
    rs = RandomSet(range(10))
    seen = []
    for x in rs.permuted(random.Random(3)):
        seen.append(x)
        rs.discard(x)
    assert sorted(seen) == list(range(10)) and not rs


def test_first_draw_is_roughly_uniform():
    rs = RandomSet(range(4))
    rng = random.Random(0)
    counts = Counter(next(rs.permuted(rng)) for _ in range(4000))
    assert all(900 < c < 1100 for c in counts.values())


def test_copy_is_independent():
    a = RandomSet([1, 2])
    b = a.copy()
    b.add(3)
    assert 3 not in a and b == {1, 2, 3}
