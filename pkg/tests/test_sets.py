import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from lopoly.sets import (
    DigitError,
    HeaderError,
    LengthError,
    PolyTable,
    TableFormatError,
    check_arity,
    complement,
    decode_table,
    disjoint,
    elements_of,
    encode_table,
    full_mask,
    iterate_partitions,
    mask_of,
    ordered_partition_arrays,
    partition_arrays,
    popcount,
    submasks,
    subset_closure,
    superset_closure,
)
from lopoly.families import example_g
from lopoly.polymorph import projection

from oracles import ordered_partitions, submask_list, unordered_partitions


def tables(max_n=6, ell=3):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.integers(0, ell - 1), min_size=1 << n, max_size=1 << n)
    ).map(lambda v: PolyTable(v, ell))


def test_mask_helpers():
    assert mask_of([1, 3]) == 0b101
    assert elements_of(0b101) == (1, 3)
    assert full_mask(4) == 15
    assert complement(0b0101, 4) == 0b1010
    assert disjoint(0b01, 0b10) and not disjoint(0b11, 0b10)
    assert popcount(0b1011) == 3
    with pytest.raises(ValueError):
        mask_of([0])


@pytest.mark.parametrize("n", [0, 25, -1])
def test_arity_cap(n):
    with pytest.raises(ValueError):
        check_arity(n)


@given(st.integers(1, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, (1 << n) - 1),
                                                      st.integers(0, (1 << n) - 1))))
def test_complement_involution_and_disjoint_symmetry(args):
    n, x, y = args
    assert complement(complement(x, n), n) == x
    assert disjoint(x, y) == disjoint(y, x)
    assert disjoint(x, complement(x, n))


@given(st.integers(0, 1023))
def test_submasks_match_brute_force(x):
    assert list(submasks(x)) == submask_list(x)


def test_single_partition_of_a_singleton():
    assert list(iterate_partitions(1)) == [(0, 0, 1)]


@pytest.mark.parametrize("n", range(1, 8))
def test_partition_stream_is_canonical_dedupe(n):
    got = list(iterate_partitions(n))
    assert got == sorted(set(got), key=lambda p: (p.x, p.y))
    assert sorted(got) == unordered_partitions(n)
    assert len(got) == (3**n + 3) // 6
    full = full_mask(n)
    for x, y, z in got:
        assert x | y | z == full and not (x & y or y & z or x & z)
        assert x <= y <= z


@pytest.mark.parametrize("n", range(1, 7))
def test_orbit_sizes_sum_to_ordered_count(n):
    total = sum(len(set(itertools.permutations(p))) for p in iterate_partitions(n))
    assert total == 3**n


@pytest.mark.parametrize("n", range(1, 7))
def test_partition_arrays_match_iterator(n):
    xs, ys, zs = partition_arrays(n)
    assert list(zip(xs.tolist(), ys.tolist(), zs.tolist())) == [tuple(p) for p in iterate_partitions(n)]
    ox, oy, oz = ordered_partition_arrays(n)
    assert sorted(zip(ox.tolist(), oy.tolist(), oz.tolist())) == sorted(ordered_partitions(n))


def test_encode_unary_projection():
    assert encode_table(projection(1, 1)) == "poly 1 3\n01\n"
    assert decode_table("poly 1 3\n01\n") == projection(1, 1)


def test_encode_example_g_marks_four_block_elements():
    text = encode_table(example_g())
    head, body, _ = text.split("\n")
    assert head == "poly 9 3" and len(body) == 512
    assert body[mask_of([3, 4, 5, 6])] == "2"


@pytest.mark.parametrize("text, error", [
    ("poly 1 3\n03\n", DigitError),
    ("poly 2 3\n012\n", LengthError),
    ("poli 1 3\n01\n", HeaderError),
    ("poly 1\n01\n", HeaderError),
    ("poly 1 3\n0x\n", DigitError),
    ("poly 30 3\n01\n", HeaderError),
    ("poly 1 3\n", HeaderError),
])
def test_decode_errors_are_distinct(text, error):
    with pytest.raises(error):
        decode_table(text)
    assert issubclass(error, TableFormatError)


@given(tables(10))
def test_round_trip(f):
    assert decode_table(encode_table(f)) == f
    assert encode_table(decode_table(encode_table(f))) == encode_table(f)


@pytest.mark.parametrize("n", range(1, 11))
def test_round_trip_many_random_tables(n):
    rng = np.random.default_rng(n)
    for _ in range(1000 if n <= 6 else 100):
        f = PolyTable(rng.integers(0, 3, 1 << n), 3)
        assert decode_table(encode_table(f)) == f


def test_table_validation():
    with pytest.raises(ValueError):
        PolyTable([0, 1, 2], 3)
    with pytest.raises(ValueError):
        PolyTable([0, 3], 3)
    f = PolyTable([0, 1])
    with pytest.raises(ValueError):
        f.values[0] = 1


def test_equality_and_hash_are_entrywise():
    a, b = PolyTable([0, 1, 1, 2]), PolyTable([0, 1, 1, 2])
    assert a == b and hash(a) == hash(b)
    assert a != a.replace(3, 1)
    assert a != a.with_ell(4)


@given(st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.booleans(), min_size=1 << n, max_size=1 << n))))
def test_closures_match_brute_force(args):
    n, bits = args
    ind = np.array(bits)
    up = superset_closure(ind, n)
    down = subset_closure(ind, n)
    for m in range(1 << n):
        assert up[m] == any(ind[s] for s in submask_list(m))
        assert down[m] == any(ind[s] for s in range(1 << n) if s & m == m)
