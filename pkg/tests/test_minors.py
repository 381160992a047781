import json

import pytest
from hypothesis import given, strategies as st

from lopoly.families import example_f, example_minor_map, family
from lopoly.minors import (
    Branch,
    ChainError,
    MinorChain,
    MinorMap,
    apply_minor,
    chain_condition,
    random_chain,
    select_I,
)
from lopoly.polymorph import is_polymorphism, projection
from lopoly.recolour import has_small_2set
from lopoly.sets import PolyTable, mask_of

from conftest import polymorphisms
from oracles import minor_naive

poly_strategy = st.integers(1, 4).flatmap(
    lambda n: st.integers(0, len(polymorphisms(n)) - 1).map(lambda i: polymorphisms(n)[i]))


def maps(n, max_m=5):
    return st.integers(1, max_m).flatmap(
        lambda m: st.lists(st.integers(1, m), min_size=n, max_size=n).map(lambda img: MinorMap(img, m)))


def test_identity_minor():
    f = projection(4, 3)
    assert apply_minor(f, MinorMap.identity(4)) == f
    assert MinorMap.identity(4).is_identity()


def test_example_minor_is_second_projection():
    pi = MinorMap(example_minor_map())
    assert pi.m == 2
    assert apply_minor(example_f(), pi) == projection(2, 2)


def test_map_validation():
    with pytest.raises(ValueError):
        MinorMap([])
    with pytest.raises(ValueError):
        MinorMap([1, 3], 2)
    with pytest.raises(ValueError):
        apply_minor(projection(3, 1), MinorMap([1, 1]))


@given(poly_strategy.flatmap(lambda f: st.tuples(st.just(f), maps(f.n))))
def test_minor_matches_definition_and_preserves_polymorphism(args):
    f, pi = args
    g = apply_minor(f, pi)
    assert g.digits() == "".join(map(str, minor_naive(f.values.tolist(), pi.image, pi.m)))
    assert is_polymorphism(g)
    for s in range(1 << pi.m):
        assert pi.preimage(s) == int(pi.preimage_table()[s])


@given(poly_strategy.flatmap(lambda f: st.tuples(
    st.just(f), maps(f.n).flatmap(lambda p: st.tuples(st.just(p), maps(p.m))))))
def test_minors_compose(args):
    f, (pi, sigma) = args
    assert apply_minor(apply_minor(f, pi), sigma) == apply_minor(f, pi.then(sigma))


def test_select_projection_branches():
    s = select_I(projection(5, 2))
    assert s.branch is Branch.LOW_ARITY_DICTATOR and s.variables == (2,)
    s = select_I(projection(8, 5))
    assert s.branch is Branch.SINGLETON_1SET and s.variables == (5,) and s.dictator == 5


def test_select_example_f_pair():
    s = select_I(example_f())
    assert s.branch is Branch.PAIR_1SET and s.variables == (1, 3) and s.dictator == 1
    assert example_f()[mask_of([1])] == 0 and example_f()[s.mask] == 1


def test_select_small_2set():
    f = projection(3, 1).replace(7, 2)
    s = select_I(f)
    assert s.branch is Branch.SMALL_2SET and s.variables == (1, 2, 3)


def test_select_prefers_smallest_then_least_small_2set():
    f = PolyTable([0, 0, 0, 0, 2, 2, 2, 2])
    assert is_polymorphism(f)
    s = select_I(f)
    assert s.branch is Branch.SMALL_2SET and s.mask == mask_of([3])


@given(poly_strategy)
def test_selection_invariants(f):
    s = select_I(f)
    assert 1 <= len(s) <= 3
    if s.branch is Branch.SMALL_2SET:
        assert f[s.mask] == 2
    else:
        assert not has_small_2set(f) and len(s) == 1
    assert select_I(PolyTable(f.values.copy())) == s


def test_selection_invariants_on_families():
    for name, f in family():
        s = select_I(f)
        assert len(s) <= 3, name
        if s.branch is Branch.SINGLETON_1SET:
            assert f[s.mask] == 1 and s.variables == (s.dictator,)
        if s.branch is Branch.PAIR_1SET:
            assert len(s) == 2 and s.dictator in s.variables and f[s.mask] == 1


def test_identity_chain_of_projections():
    f = projection(5, 2)
    chain = MinorChain.from_maps(f, [MinorMap.identity(5)] * 3)
    assert chain_condition(chain).witness == (1, 2)


def test_example_chain_with_identity_tail():
    pi = MinorMap(example_minor_map())
    chain = MinorChain.from_maps(example_f(), [pi, MinorMap.identity(2), MinorMap.identity(2)])
    res = chain_condition(chain)
    assert res.witness == (1, 2)
    assert res.selections[0].variables == (1, 3)
    assert pi.preimage(res.selections[1].mask) == mask_of(range(3, 10))


def test_singleton_selection_would_fail_on_example():
    # with I(f) = {1} the pulled-back {2} misses it, which is why pairs are used
    pi = MinorMap(example_minor_map())
    assert pi.preimage(mask_of([2])) & mask_of([1]) == 0


def test_chain_validates_minors():
    with pytest.raises(ChainError):
        MinorChain([projection(2, 1), projection(2, 1)], [MinorMap([2, 1])])
    with pytest.raises(ChainError):
        MinorChain([projection(2, 1)], [MinorMap([1, 2])])


def test_chain_json_round_trip():
    chain = random_chain(11)
    data = json.loads(chain.to_json())
    assert set(data) == {"arities", "tables", "maps"}
    back = MinorChain.from_json(chain.to_json())
    assert back.tables == chain.tables and back.maps == chain.maps


def test_composite_maps():
    chain = random_chain(5, length=4)
    for i in range(1, 4):
        for j in range(i + 1, 5):
            assert apply_minor(chain.tables[i - 1], chain.composite(i, j)) == chain.tables[j - 1]


@pytest.mark.parametrize("seed", range(40))
def test_random_chain_contract(seed):
    a, b = random_chain(seed), random_chain(seed)
    assert a.tables == b.tables and a.maps == b.maps
    assert len(a) == 4 and all(f.n <= 9 for f in a.tables)
    assert not all(pi.is_identity() for pi in a.maps)
    for f, pi, g in zip(a.tables, a.maps, a.tables[1:]):
        assert apply_minor(f, pi) == g
    assert not chain_condition(a).violation


def test_random_chain_bounds():
    with pytest.raises(ValueError):
        random_chain(0, max_arity=10)
    with pytest.raises(ValueError):
        random_chain(0, min_arity=1, max_arity=1, length=3)
    assert len(random_chain(0, length=1)) == 1
    assert len(random_chain(0, length=6)) == 6


def test_random_chains_exercise_every_branch():
    seen = set()
    for seed in range(600):
        seen.update(s.branch for s in chain_condition(random_chain(seed)).selections)
    assert seen == set(Branch)


def test_random_chain_from_low_arity_is_never_all_identity():
    for seed in range(300):
        chain = random_chain(seed, 1, 2)
        assert not all(pi.is_identity() for pi in chain.maps)
        for f, pi, g in zip(chain.tables, chain.maps, chain.tables[1:]):
            assert apply_minor(f, pi) == g
