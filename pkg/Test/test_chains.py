from fractions import Fraction

import pytest

import catalog
import chains
from arithmetic import is_prime
from catalog import parse_group_id
from enums import CheckStatus
from errors import NotCoveredError, NotSimpleError, UnsupportedFamilyError
from model import OracleReport, ValueOrRange


@pytest.fixture
def psl27_facts():
    return OracleReport(group="L(2,7)", order=168, length=5, depth=3, cd=2, chief_length=1,
                        soluble=False, supersoluble=False, radical_order=1, socle_order=168,
                        composition_factors=["L(2,7)"], subgroup_count=179)


def test_report_psl27():
    rep = chains.report(catalog.linear(2, 7))
    assert rep.group == "L(2,7)"
    assert (rep.length.value, rep.depth.value, rep.cd.value) == (5, 3, 2)
    assert rep.cr == Fraction(5, 3)
    assert rep.soluble is False

def test_report_a6_is_the_equality_case():
    rep = chains.report(catalog.alternating(6))
    assert rep.group == "L(2,9)"
    assert (rep.length.value, rep.depth.value, rep.cd.value) == (5, 4, 1)
    assert rep.cr == Fraction(5, 4)

def test_report_supersoluble_cyclic():
    rep = chains.report(catalog.cyclic(30))
    assert (rep.length.value, rep.depth.value, rep.cd.value) == (3, 3, 0)
    assert rep.cr == 1
    assert rep.supersoluble is True
    assert chains.ANCHOR_IWASAWA in rep.provenance

def test_report_s4_is_not_supersoluble():
    rep = chains.report(catalog.symmetric(4))
    assert rep.cd.value == 1
    assert rep.supersoluble is False
    assert rep.chief_length.value == 3

def test_report_range_has_no_exact_ratio():
    rep = chains.report(catalog.linear(3, 5))
    assert not rep.is_exact
    with pytest.raises(ValueError):
        _ = rep.cr

def test_report_uncovered_sporadic():
    with pytest.raises(NotCoveredError):
        chains.report(catalog.sporadic("M24"))

def test_report_provenance_names_both_engines():
    rep = chains.report(catalog.linear(2, 13))
    assert rep.provenance[0].startswith("length:")
    assert rep.provenance[1].startswith("depth:")


# --- Predicates ---

@pytest.mark.parametrize("text,expected", [
    ("L(2,4)", True), ("L(2,5)", True), ("L(2,9)", True), ("L(2,13)", True), ("A(7)", False), ("M11", False),
])
def test_cd1_simple(text, expected):
    assert chains.cd1_simple(parse_group_id(text)) is expected

@pytest.mark.parametrize("text,expected", [
    ("L(2,125)", True), ("L(2,23)", True), ("L(2,13)", False), ("A(7)", True), ("J1", True),
    ("U(3,5)", True), ("L(2,7)", True), ("M22", False),
])
def test_cd2_simple(text, expected):
    assert chains.cd2_simple(parse_group_id(text)) is expected

@pytest.mark.parametrize("text,expected", [
    ("L(2,9)", True), ("L(2,19)", True), ("L(2,13)", False), ("J1", False),
])
def test_cr5over4_equality(text, expected):
    assert chains.cr5over4_equality(parse_group_id(text)) is expected

def test_predicates_reject_non_simple():
    for predicate in (chains.cd1_simple, chains.cd2_simple, chains.cr5over4_equality):
        with pytest.raises(NotSimpleError):
            predicate(catalog.symmetric(4))

def test_predicates_agree_with_engines_for_L2_primes():
    # report() raises InternalInconsistencyError when the two routes disagree
    for g in catalog.iter_simple_groups(q_max=3000, families=["L2"]):
        if not is_prime(g.q):
            continue
        rep = chains.report(g)
        if rep.is_exact:
            assert chains.cd1_simple(g) == (rep.cd.value == 1), catalog.render(g)
            assert chains.cd2_simple(g) == (rep.cd.value == 2), catalog.render(g)

def test_simple_groups_have_positive_cd():
    for g in catalog.iter_simple_groups(q_max=200, families=["A", "L2", "Sz", "sporadic"]):
        try:
            rep = chains.report(g)
        except NotCoveredError:
            continue
        assert rep.cd.low >= 1, catalog.render(g)
        assert rep.cr_low >= chains.CR_SIMPLE_MIN or not rep.is_exact, catalog.render(g)


@pytest.fixture(scope="module")
def exact_reports_to_1e8():
    """(group, report) for every simple group of order <= 10^8 whose report is exact."""
    pairs = []
    for g in catalog.iter_simple_groups(max_order=10 ** 8):
        try:
            rep = chains.report(g)
        except (NotCoveredError, UnsupportedFamilyError):
            continue
        if rep.is_exact:
            pairs.append((g, rep))
    return pairs

def test_cr_at_least_five_quarters_up_to_1e8(exact_reports_to_1e8):
    assert len(exact_reports_to_1e8) > 50
    for g, rep in exact_reports_to_1e8:
        assert rep.cr >= chains.CR_SIMPLE_MIN, rep.group
        assert rep.length.value <= 5 * rep.cd.value, rep.group

def test_length_equals_five_cd_exactly_on_equality_set(exact_reports_to_1e8):
    equal = {rep.group for _, rep in exact_reports_to_1e8 if rep.length.value == 5 * rep.cd.value}
    predicted = {rep.group for g, rep in exact_reports_to_1e8 if chains.cr5over4_equality(g)}
    assert equal == predicted
    assert {"L(2,9)", "L(2,19)", "L(2,29)"} <= equal
    for g, rep in exact_reports_to_1e8:
        if rep.group in equal:
            assert (rep.length.value, rep.depth.value) == (5, 4), rep.group

def test_cd2_members_up_to_1e8(exact_reports_to_1e8):
    by_engines = {rep.group for _, rep in exact_reports_to_1e8 if rep.cd.value == 2}
    by_predicate = {rep.group for g, rep in exact_reports_to_1e8 if chains.cd2_simple(g)}
    assert by_engines == by_predicate
    assert {name for name in by_engines if not name.startswith("L(2,")} == {"A(7)", "J1", "U(3,5)"}
    assert {"L(2,7)", "L(2,8)", "L(2,11)", "L(2,27)", "L(2,125)"} <= by_engines

def test_cd1_members_up_to_1e8(exact_reports_to_1e8):
    by_engines = {rep.group for _, rep in exact_reports_to_1e8 if rep.cd.value == 1}
    by_predicate = {rep.group for g, rep in exact_reports_to_1e8 if chains.cd1_simple(g)}
    assert by_engines == by_predicate
    assert all(name.startswith("L(2,") for name in by_engines)

def test_L2_prime_powers_up_to_500():
    cd2_composite = set()
    cd1_composite = set()
    for g in catalog.iter_simple_groups(q_max=500, families=["L2"]):
        rep = chains.report(g)
        if not rep.is_exact:
            continue
        assert chains.cd1_simple(g) == (rep.cd.value == 1), rep.group
        assert chains.cd2_simple(g) == (rep.cd.value == 2), rep.group
        assert chains.cr5over4_equality(g) == (rep.cr == chains.CR_SIMPLE_MIN), rep.group
        assert rep.cr >= chains.CR_SIMPLE_MIN, rep.group
        if not is_prime(g.q):
            if rep.cd.value == 2:
                cd2_composite.add(g.q)
            if rep.cd.value == 1:
                cd1_composite.add(g.q)
    assert cd2_composite == {8, 27, 125}
    assert cd1_composite == {4, 9}


# --- Interval arithmetic ---

def test_chain_difference_exact():
    assert chains.chain_difference(ValueOrRange.exact(5), ValueOrRange.exact(3)) == ValueOrRange.exact(2)

def test_chain_difference_ranges():
    cd = chains.chain_difference(ValueOrRange.between(12, None), ValueOrRange.between(3, 5))
    assert (cd.low, cd.high) == (7, None)
    cd = chains.chain_difference(ValueOrRange.between(6, 8), ValueOrRange.between(3, 10))
    assert (cd.low, cd.high) == (0, 5)

def test_chain_ratio():
    assert chains.chain_ratio(ValueOrRange.exact(5), ValueOrRange.exact(4)) == (Fraction(5, 4), Fraction(5, 4))
    low, high = chains.chain_ratio(ValueOrRange.between(12, None), ValueOrRange.between(3, 4))
    assert low == 3
    assert high is None

def test_chain_ratio_of_trivial_group():
    assert chains.chain_ratio(ValueOrRange.exact(0), ValueOrRange.exact(0)) == (1, 1)


# --- Inequality suite ---

def _statuses(results):
    return {r.name: r.status for r in results}

def test_inequality_suite_psl213_passes():
    results = chains.inequality_suite([chains.report(catalog.linear(2, 13))])
    assert results
    assert all(r.status is CheckStatus.PASS for r in results), [r for r in results if r.status is not CheckStatus.PASS]

def test_inequality_suite_a6_equality_case():
    results = chains.inequality_suite([chains.report(catalog.alternating(6))])
    assert _statuses(results)["length-vs-cd"] is CheckStatus.PASS
    assert _statuses(results)["cr-lower-bound"] is CheckStatus.PASS
    assert not any(r.status is CheckStatus.FAIL for r in results)

def test_inequality_suite_skips_simple_only_checks_for_soluble():
    statuses = _statuses(chains.inequality_suite([chains.report(catalog.symmetric(4))]))
    assert statuses["length-vs-cd"] is CheckStatus.SKIP
    assert statuses["trivial-radical-ratio"] is CheckStatus.SKIP
    assert statuses["radical-quotient-length"] is CheckStatus.PASS

@pytest.mark.parametrize("text", ["A(5)xC(2)", "S(5)", "L(2,8).3", "2.A(7)", "A(5)xA(5)", "J1", "L(2,27)"])
def test_inequality_suite_has_no_failures(text):
    results = chains.inequality_suite([chains.report(parse_group_id(text))])
    assert not any(r.status is CheckStatus.FAIL for r in results), text

def test_inequality_suite_with_oracle_facts(psl27_facts):
    rep = chains.report(catalog.linear(2, 7))
    results = chains.inequality_suite([rep], {"L(2,7)": psl27_facts})
    assert not any(r.status is CheckStatus.FAIL for r in results)

def test_inequality_suite_flags_bad_facts(psl27_facts):
    psl27_facts.length = 20
    rep = chains.report(catalog.linear(2, 7))
    results = chains.inequality_suite([rep], {"L(2,7)": psl27_facts})
    failed = [r for r in results if r.status is CheckStatus.FAIL]
    assert any(r.name == "length-vs-cd" for r in failed)
