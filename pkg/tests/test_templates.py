import itertools

import pytest
from hypothesis import given, strategies as st

from lopoly.templates import Relation3, ZVerdict, lo_relation, nae_relation, parse_target, z_check

from oracles import lo_triple, nae_triple


def test_lo2_is_one_in_three():
    assert set(lo_relation(2)) == {(0, 0, 1), (0, 1, 0), (1, 0, 0)}


def test_lo3_membership():
    lo3 = lo_relation(3)
    for t in [(0, 1, 2), (1, 1, 2), (0, 0, 1), (0, 0, 2)]:
        for p in itertools.permutations(t):
            assert p in lo3
    assert (1, 2, 2) not in lo3 and (0, 1, 1) not in lo3


@pytest.mark.parametrize("k", range(2, 9))
def test_relations_match_definitions(k):
    lo, nae = lo_relation(k), nae_relation(k)
    cube = list(itertools.product(range(k), repeat=3))
    assert set(lo) == {t for t in cube if lo_triple(*t)}
    assert set(nae) == {t for t in cube if nae_triple(*t)}
    assert lo.symmetric and nae.symmetric
    assert all((a, a, a) not in lo for a in range(k))
    if k <= 6:
        assert set(lo) <= set(nae)


def test_sizes():
    assert len(nae_relation(2)) == 6
    assert (0, 1, 1) in nae_relation(2)
    sizes = [len(lo_relation(k)) for k in range(2, 9)]
    assert sizes[0] == 3
    assert all(a < b for a, b in zip(sizes, sizes[1:]))


@pytest.mark.parametrize("k", [1, 0, -3])
def test_too_few_colours(k):
    with pytest.raises(ValueError):
        lo_relation(k)
    with pytest.raises(ValueError):
        nae_relation(k)


def test_symmetry_is_asserted():
    with pytest.raises(ValueError):
        Relation3(2, [(0, 0, 1)])
    assert not Relation3(2, [(0, 0, 1)], symmetric=False).symmetric


def test_parse_target():
    assert parse_target("lo3") == lo_relation(3)
    assert parse_target("NAE2") == nae_relation(2)
    assert parse_target("lo5") == lo_relation(5)
    with pytest.raises(ValueError):
        parse_target("h2")


@pytest.mark.parametrize("k", range(2, 7))
def test_zcheck_lo_is_transitive_tournament(k):
    v = z_check(lo_relation(k))
    assert v.verdict is ZVerdict.NO_HOM_TO_Z_TARGET
    assert set(v.edges) == {(a, b) for a in range(k) for b in range(k) if a < b}


def test_zcheck_nae2_has_a_two_cycle():
    v = z_check(nae_relation(2))
    assert v.verdict is ZVerdict.INCONCLUSIVE
    assert set(v.edges) == {(0, 1), (1, 0)}
    assert sorted(v.cycle) == [0, 1] and not v.loops


def test_zcheck_constant_triple_is_a_loop():
    rel = Relation3(3, list(lo_relation(3)) + [(2, 2, 2)])
    v = z_check(rel)
    assert v.verdict is ZVerdict.INCONCLUSIVE and v.loops == (2,)


def _acyclic_loopless(d, edges):
    if any(a == b for a, b in edges):
        return False
    # a digraph is acyclic iff repeatedly deleting sinks empties it
    alive = set(range(d))
    while alive:
        sinks = [v for v in alive if not any(a == v and b in alive for a, b in edges)]
        if not sinks:
            return False
        alive -= set(sinks)
    return True


symmetric_relations = st.integers(2, 4).flatmap(lambda d: st.tuples(
    st.just(d),
    st.sets(st.tuples(*[st.integers(0, d - 1)] * 3), max_size=12),
)).map(lambda a: Relation3(a[0], {p for t in a[1] for p in itertools.permutations(t)}))


@given(symmetric_relations, st.randoms())
def test_zcheck_verdict_matches_sink_deletion_and_relabelling(rel, rnd):
    v = z_check(rel)
    expected = _acyclic_loopless(rel.d, v.edges)
    assert (v.verdict is ZVerdict.NO_HOM_TO_Z_TARGET) == expected
    perm = list(range(rel.d))
    rnd.shuffle(perm)
    assert z_check(rel.relabel(perm)).verdict is v.verdict
