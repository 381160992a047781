import pytest
from hypothesis import given, strategies as st

from lopoly.families import example_f, example_g, star_saturation
from lopoly.lemmas import (
    LEMMA_IDS,
    LemmaReport,
    check_2set,
    check_boolean_recolouring,
    check_complementarity,
    check_kneser,
    check_minimal_counterexamples,
    check_saturation,
    check_static,
    check_type,
    check_unique_saturation2,
    family_reports,
    lemma_suite,
    union_of_4_element_2sets,
)
from lopoly.polymorph import projection
from lopoly.recolour import enumerate_pure_saturations
from lopoly.sets import PolyTable

from conftest import polymorphisms

poly_strategy = st.integers(1, 4).flatmap(
    lambda n: st.integers(0, len(polymorphisms(n)) - 1).map(lambda i: polymorphisms(n)[i]))


@given(poly_strategy)
def test_per_table_checks_hold(f):
    assert check_kneser(f) and check_static(f) and check_2set(f) and check_type(f)
    assert check_complementarity(f)
    ok, g = check_saturation(f)
    assert ok and check_boolean_recolouring(g)


def test_2set_check_rejects_disjoint_2sets():
    # not a polymorphism: {1} and {2} are disjoint 2-sets
    assert not check_2set(PolyTable([0, 2, 2, 2]))
    assert not check_2set(PolyTable([2, 0, 0, 1]))


def test_type_check_rejects_mixed_splits():
    # 2-set {1,2} splits into {1}, {2}; 1 + 1 is neither type
    assert not check_type(PolyTable([0, 1, 1, 2]))
    assert check_type(PolyTable([0, 0, 1, 2]))


def test_kneser_check_rejects_all_zero_small_sets():
    assert not check_kneser(PolyTable([0] * 16))


def test_minimal_counterexample_on_example():
    f = example_f()
    assert not union_of_4_element_2sets(f)
    g = star_saturation(7, 1)
    assert union_of_4_element_2sets(g) and check_minimal_counterexamples(g)


def test_unique_saturation_on_example():
    f = example_f()
    sats = enumerate_pure_saturations(f)
    assert len(sats) == 1 and next(iter(sats)) == example_g()
    assert check_unique_saturation2(f, sats, True)
    # a table the saturation leaves untouched contradicts the forced part
    assert not check_unique_saturation2(f, [f], True)


def test_report_records():
    r = LemmaReport("kneser", 3)
    r.record(True, projection(3, 1))
    r.record(False, projection(3, 2))
    r.record(False, projection(3, 3))
    rec = r.to_record()
    assert rec["checked"] == 3 and rec["violations"] == 2 and not r.ok
    assert rec["counterexample"] == "poly 3 3\n00110011\n"


def test_suite_small_arity_clean():
    suite = lemma_suite(3, families=False)
    assert suite.ok and suite.complete
    assert {r.lemma for r in suite.reports} <= set(LEMMA_IDS)
    assert sum(r.checked for r in suite.by_lemma("kneser")) == 3 + 17 + 306


def test_suite_filtered_search_arity_five():
    suite = lemma_suite(2, families=False, filtered_max=5)
    rep = [r for r in suite.by_lemma("small_arity") if r.arity == 5]
    assert rep[0].checked == 320 and rep[0].ok


def test_suite_budget_marks_incomplete():
    suite = lemma_suite(4, budget=50, families=False)
    assert not suite.complete


def test_suite_arity_limits():
    with pytest.raises(ValueError):
        lemma_suite(5)
    with pytest.raises(ValueError):
        lemma_suite(4, filtered_max=7)


def test_family_reports_clean():
    reps = {r.lemma: r for r in family_reports()}
    for name in ("cor_lift", "unique_saturation2", "structure", "prop_minimal_counterexamples",
                 "non_unique", "hitting_set_projections", "saturation_commutes_sometimes"):
        assert reps[name].checked > 0 and reps[name].ok, name


@pytest.mark.slow
def test_suite_arity_four_exhaustive():
    suite = lemma_suite(4)
    assert suite.ok and suite.complete
