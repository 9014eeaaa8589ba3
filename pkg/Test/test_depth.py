import pytest

import catalog
import depth
from arithmetic import is_prime, omega
from catalog import parse_group_id
from enums import DepthProvenance
from errors import ArithmeticDomainError, NotCentralExtensionError, NotCoveredError, NotSimpleError


def test_depth3_simple_examples():
    assert depth.depth3_simple(catalog.linear(2, 8))
    assert not depth.depth3_simple(catalog.alternating(7))
    assert depth.depth3_simple(catalog.sporadic("M23"))
    assert depth.depth3_simple(catalog.sporadic("B"))
    assert depth.depth3_simple(catalog.alternating(5))
    assert depth.depth3_simple(catalog.linear(2, 27))
    assert not depth.depth3_simple(catalog.linear(2, 9))

def test_depth3_simple_linear_row():
    # (q^3-1)/((q-1)(3,q-1)) = 7 for L3(2) ~ L2(7); 73 for L3(8)
    assert depth.depth3_simple(catalog.linear(3, 8))
    assert not depth.depth3_simple(catalog.linear(3, 4))

def test_depth3_simple_suzuki():
    assert depth.depth3_simple(catalog.suzuki(8))
    assert depth.depth3_simple(catalog.suzuki(32))
    assert not depth.depth3_simple(catalog.suzuki(2 ** 11))   # 2047 = 23 * 89

def test_depth3_simple_rejects_non_simple():
    with pytest.raises(NotSimpleError):
        depth.depth3_simple(catalog.cyclic(6))


@pytest.mark.parametrize("p,expected", [(13, 3), (41, 4), (23, 3), (5, 3), (7, 3), (11, 3), (43, 3)])
def test_depth_L2_prime(p, expected):
    result = depth.depth_L2_prime(p)
    assert result.value.value == expected
    assert result.provenance is DepthProvenance.L2P_DICHOTOMY

@pytest.mark.parametrize("p", [4, 15, 3])
def test_depth_L2_prime_domain(p):
    with pytest.raises(ArithmeticDomainError):
        depth.depth_L2_prime(p)

def test_depth_L2_prime_matches_depth3_list():
    for p in range(13, 10_000):
        if is_prime(p):
            shallow = depth.depth_L2_prime(p).value.value == 3
            assert shallow == depth.depth3_simple(catalog.linear(2, p)), p

@pytest.mark.parametrize("p,expected", [(3, 3), (5, 4), (433373, 4)])
def test_depth_L2_pcubed(p, expected):
    assert depth.depth_L2_pcubed(p).value.value == expected

def test_depth_L2_pcubed_deep_case():
    # 41 = 1 mod 40 with Omega(40) = 4 and Omega(42) = 3
    assert depth.depth_L2_pcubed(41).value.value == 5

def test_depth_L2_pcubed_rejects_composite():
    with pytest.raises(ArithmeticDomainError):
        depth.depth_L2_pcubed(9)


def test_quasisimple_depth4():
    assert depth.quasisimple_depth4(parse_group_id("2.Sz(8)"))
    assert not depth.quasisimple_depth4(parse_group_id("2.A(7)"))
    assert depth.quasisimple_depth4(parse_group_id("SL(2,13)"))
    assert depth.quasisimple_depth4(parse_group_id("2.B"))
    assert depth.quasisimple_depth4(parse_group_id("2.A(5)"))

def test_quasisimple_depth4_rejects_non_central():
    with pytest.raises(NotCentralExtensionError):
        depth.quasisimple_depth4(catalog.alternating(7))
    with pytest.raises(NotCentralExtensionError):
        depth.quasisimple_depth4(catalog.special_linear(2, 8))


def test_table3_membership():
    assert depth.table3_membership(catalog.alternating(6), 2)
    assert depth.table3_membership(catalog.linear(2, 29), 2)
    assert not depth.table3_membership(catalog.linear(2, 13), 2)
    assert depth.table3_membership(catalog.linear(3, 4), 3)
    assert not depth.table3_membership(catalog.alternating(7), 4)

def test_table4_membership():
    assert depth.table4_membership(catalog.alternating(13)) == ["13:6"]
    assert depth.table4_membership(catalog.sporadic("J1")) == ["7:6", "11:10", "19:6", "2^3:7:3"]
    assert depth.table4_membership(catalog.suzuki(8)) == []
    assert depth.table4_membership(catalog.symmetric(4)) == []


# --- depth_of ---

@pytest.mark.parametrize("text,expected", [
    ("C(12)", 3), ("L(2,9)", 4), ("M11", 4), ("A(5)", 3), ("M23", 3), ("L(2,7)", 3),
    ("S(4)", 3), ("D(12)", 3), ("A(5)xC(2)", 4), ("S(5)", 4), ("SL(2,13)", 4), ("2.A(7)", 5),
    ("C(2)wr2", 3), ("C(3)wr3", 4), ("TF4(2)'", 4), ("M", 4),
])
def test_depth_of_exact(text, expected):
    result = depth.depth_of(parse_group_id(text))
    assert result.value.is_exact
    assert result.value.value == expected

def test_depth_of_soluble_uses_chief_length():
    result = depth.depth_of(catalog.cyclic(30))
    assert result.value.value == 3
    assert result.provenance is DepthProvenance.KOHLER_CHIEF

def test_depth_of_cyclic_is_omega():
    for n in (2, 8, 60, 97, 360, 1024):
        assert depth.depth_of(catalog.cyclic(n)).value.value == omega(n)

def test_depth_of_ambiguous_extension_is_a_range():
    value = depth.depth_of(parse_group_id("L(2,9).2")).value
    assert not value.is_exact
    assert (value.low, value.high) == (4, 5)

def test_depth_of_composite_L2_is_bounded():
    value = depth.depth_of(catalog.linear(2, 3 ** 4)).value
    assert value.low >= 3
    assert value.high is not None

def test_depth3_implies_exact_three():
    for g in catalog.iter_simple_groups(q_max=500, families=["A", "L2", "L", "U", "Sz", "sporadic"]):
        if depth.depth3_simple(g):
            assert depth.depth_of(g).value.value == 3, catalog.render(g)

def test_insoluble_depth_at_least_three():
    for text in ("A(5)xA(5)", "S(6)", "PGL(2,7)", "2.L(2,11)", "L(2,8).3", "A(5)wr2", "L(2,7)xS(4)"):
        assert depth.depth_of(parse_group_id(text)).value.low >= 3, text

def test_square_of_depth3_simple_has_depth4():
    assert depth.depth_of(parse_group_id("A(5)xA(5)")).value.value == 4

def test_chief_length():
    assert depth.chief_length(catalog.symmetric(4)).value == 3
    assert depth.chief_length(parse_group_id("A(5)xC(2)")).value == 2
    assert depth.chief_length(catalog.special_linear(2, 5)).value == 2
    assert depth.chief_length(catalog.sporadic("J1")).value == 1

def test_depth_witnesses_for_L2():
    w = depth.depth_witnesses(catalog.linear(2, 13))
    assert w["Omega(q-1)"] == "3"
    assert w["Omega(q+1)"] == "2"
    assert w["q mod 40"] == "13"
    assert w["q-1"] == "2^2·3"


# --- Rule consistency over the catalog ---

def test_no_inconsistency_rank_one_up_to_10000():
    for g in catalog.iter_simple_groups(q_max=10_000, families=["L2", "Sz", "R", "sporadic"]):
        depth.depth_of(g)

@pytest.mark.slow
def test_no_inconsistency_alternating_up_to_10000():
    for g in catalog.iter_simple_groups(q_max=10_000, families=["A"]):
        depth.depth_of(g)

def _depth_or_uncovered(g):
    try:
        return depth.depth_of(g)
    except NotCoveredError:
        return None

def test_no_inconsistency_all_families_up_to_1000():
    covered = [_depth_or_uncovered(g) for g in catalog.iter_simple_groups(q_max=1000)]
    assert sum(r is not None for r in covered) > 100

@pytest.mark.slow
def test_no_inconsistency_higher_rank_up_to_10000():
    for g in catalog.iter_simple_groups(q_max=10_000, families=["L", "U", "PSp", "O", "G2", "TD4", "TF4"]):
        _depth_or_uncovered(g)
