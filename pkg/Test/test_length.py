import pytest

import catalog
import depth
import length
from arithmetic import is_prime, is_prime_power
from enums import LengthProvenance
from errors import GroupIdValidityError, NotCoveredError, UnsupportedFamilyError


TABLE5_L2 = {
    5: [7, 8, 9, 11, 19, 27, 29],
    6: [25, 125],
    7: [16, 32, 49, 121, 169],
    9: [81, 128, 2187],
}


@pytest.mark.parametrize("n,expected", [(5, 4), (7, 6), (8, 9), (6, 5), (13, 15)])
def test_length_alternating(n, expected):
    result = length.length_alternating(n)
    assert result.value.value == expected
    assert result.provenance is LengthProvenance.FORMULA_AN

def test_length_alternating_rejects_small_n():
    with pytest.raises(GroupIdValidityError):
        length.length_alternating(4)

@pytest.mark.parametrize("value,qs", sorted(TABLE5_L2.items()))
def test_length_L2_table_values(value, qs):
    for q in qs:
        assert length.length_L2(q).value.value == value, q

def test_length_L2_first_row_prime():
    result = length.length_L2(13)
    assert result.value.value == 4
    assert result.provenance is LengthProvenance.FORMULA_L2_PRIME

def test_length_L2_exceptions():
    assert length.length_L2(5).value.value == 4
    for q in (7, 11, 19, 29):
        assert length.length_L2(q).value.value == 5

@pytest.mark.parametrize("q", [3, 6, 12])
def test_length_L2_rejects_bad_q(q):
    with pytest.raises(GroupIdValidityError):
        length.length_L2(q)

def test_length_L2_even_matches_borel_rule():
    for f in range(2, 16):
        q = 2 ** f
        g = catalog.linear(2, q)
        assert length.length_L2(q).value.value == catalog.borel_omega(g) + catalog.twisted_rank(g)

def test_length_L2_prime_within_upper_bound():
    for p in range(5, 10_000):
        if is_prime(p):
            assert length.length_L2(p).value.value <= length.length_L2_prime_upper(p)

def test_length_U3_even():
    assert length.length_U3_even(4).value.value == 9
    assert length.length_U3_even(8).value.value == 12
    assert length.length_U3_even(32).value.value == 18
    with pytest.raises(GroupIdValidityError):
        length.length_U3_even(9)

def test_length_L3_even():
    assert length.length_L3_even(4).value.value == 9
    assert length.length_L3_even(2).value.value == 5
    assert length.length_L3_even(16).value.value == 17
    with pytest.raises(GroupIdValidityError):
        length.length_L3_even(3)

def test_length_Sz():
    assert length.length_Sz(8).value.value == 8
    assert length.length_Sz(32).value.value == 12
    assert length.length_Sz(128).value.value == 16
    with pytest.raises(GroupIdValidityError):
        length.length_Sz(16)

def test_length_bounds_characteristic_two_is_exact():
    assert length.length_bounds(catalog.e8(2)).value == 128
    assert length.length_bounds(catalog.unitary(5, 2)).value == catalog.borel_omega(catalog.unitary(5, 2)) + 3

def test_length_bounds_odd_characteristic_is_a_range():
    bounds = length.length_bounds(catalog.ree(27))
    assert not bounds.is_exact
    assert bounds.low == 12
    assert bounds.high is None

def test_length_bounds_dispatches_L2():
    assert length.length_bounds(catalog.linear(2, 9)).value == 5

def test_length_bounds_rejects_non_lie():
    with pytest.raises(UnsupportedFamilyError):
        length.length_bounds(catalog.sporadic("J1"))

def test_length_of_product_adds():
    g = catalog.product(catalog.alternating(5), catalog.cyclic(2))
    result = length.length_of(g)
    assert result.value.value == 5
    assert result.provenance is LengthProvenance.ADDITIVITY

def test_length_of_product_of_exact_parts_is_sum():
    parts = [catalog.linear(2, 7), catalog.alternating(7), catalog.cyclic(12)]
    total = sum(length.length_of(p).value.value for p in parts)
    assert length.length_of(catalog.product(*parts)).value.value == total

def test_length_of_printed_values():
    assert length.length_of(catalog.sporadic("J1")).value.value == 6
    assert length.length_of(catalog.sporadic("M11")).value.value == 7
    assert length.length_of(catalog.unitary(3, 13)).value.value == 9
    assert length.length_of(catalog.symplectic(4, 3)).value.value == 9

def test_length_of_soluble_is_omega():
    result = length.length_of(catalog.symmetric(4))
    assert result.value.value == 4
    assert result.provenance is LengthProvenance.SOLUBLE_OMEGA

def test_length_of_uncovered_sporadic():
    with pytest.raises(NotCoveredError):
        length.length_of(catalog.sporadic("M24"))

def test_length_of_aliases_agree():
    assert length.length_of(catalog.linear(3, 2)).value == length.length_of(catalog.linear(2, 7)).value
    assert length.length_of(catalog.linear(4, 2)).value.value == 9

def test_length_of_odd_lie_type_is_range():
    result = length.length_of(catalog.linear(3, 5))
    assert not result.value.is_exact
    assert result.provenance is LengthProvenance.BOREL_LOWER_BOUND

def test_length_exceeds_depth_for_odd_L2():
    # cd >= 1 for every non-abelian simple group
    for q in range(7, 10_000, 2):
        if is_prime_power(q):
            l = length.length_L2(q).value.value
            d = depth.depth_of(catalog.linear(2, q)).value
            assert l >= d.low + 1, q


# --- Length at most 9 ---

def test_table5_length_matches_formula_for_L2():
    for q in range(4, 3000):
        if not is_prime_power(q):
            continue
        l = length.length_L2(q).value.value
        assert length.table5_length(catalog.linear(2, q)) == (l if l <= 9 else None), q

def test_table5_length_named_groups():
    assert length.table5_length(catalog.alternating(8)) == 9
    assert length.table5_length(catalog.sporadic("M12")) == 8
    assert length.table5_length(catalog.sporadic("M22")) is None
    assert length.table5_length(catalog.cyclic(5)) is None

def test_u3_length9_conditions():
    assert length.u3_length9_conditions(173)
    assert not length.u3_length9_conditions(29)
    assert length.table5_length(catalog.unitary(3, 173)) == 9

def test_small_length_insoluble_shapes():
    assert length.small_length_insoluble(catalog.product(catalog.linear(2, 13), catalog.cyclic(3))) == 5
    assert length.small_length_insoluble(catalog.special_linear(2, 7)) == 6
    assert length.small_length_insoluble(catalog.symmetric(5)) == 5
    assert length.small_length_insoluble(catalog.alternating(8)) is None

def test_maximal_s4_a5_bonus():
    assert length.maximal_s4_a5_bonus(41) == 4   # 41 = 1 mod 8
    assert length.maximal_s4_a5_bonus(13) == 3
