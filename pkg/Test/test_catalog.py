import pytest

import catalog
from arithmetic import omega
from catalog import parse_group_id, render
from enums import Family, Sign
from errors import GroupIdSyntaxError, GroupIdValidityError, UnsupportedFamilyError


def test_parse_linear():
    g = parse_group_id("L(2,7)")
    assert g.family is Family.LINEAR
    assert g.params == (2, 7)
    assert g.sign is Sign.PLUS

def test_parse_suzuki_and_reject_even_exponent():
    assert parse_group_id("Sz(8)") == catalog.suzuki(8)
    with pytest.raises(GroupIdValidityError):
        parse_group_id("Sz(4)")

@pytest.mark.parametrize("text", ["", "L(2)", "Q(5)", "A(5)x", "L(2,7"])
def test_parse_syntax_errors(text):
    with pytest.raises(GroupIdSyntaxError):
        parse_group_id(text)

@pytest.mark.parametrize("text", ["L(2,6)", "D(7)", "A(2)", "A(5).4", "R(9)"])
def test_parse_validity_errors(text):
    with pytest.raises(GroupIdValidityError):
        parse_group_id(text)

def test_parse_compound_ids():
    g = parse_group_id("A(5) x C(2)")
    assert g == catalog.product(catalog.alternating(5), catalog.cyclic(2))
    assert parse_group_id("2.A(7)") == catalog.central(2, catalog.alternating(7))
    assert parse_group_id("L(2,9).2") == catalog.extension(catalog.linear(2, 9), 2)
    assert parse_group_id("C(3)wr3") == catalog.wreath(catalog.cyclic(3), 3)

def test_derived_tokens():
    assert parse_group_id("R(3)'") == catalog.linear(2, 8)
    assert parse_group_id("G2(2)'") == catalog.unitary(3, 3)

@pytest.mark.parametrize("text", [
    "A(7)", "S(4)", "C(30)", "D(12)", "L(3,4)", "U(3,5)", "PSp(4,3)", "Sz(32)", "R(27)",
    "G2(4)", "TD4(2)", "E8(2)", "2E6(2)", "O(+,8,2)", "O(0,7,3)", "M24", "TF4(2)'",
    "2.A(7)", "SL(2,13)", "A(5)xC(2)", "L(2,29).2", "C(2)wr2",
])
def test_render_round_trip(text):
    assert render(parse_group_id(text)) == text

def test_orders():
    assert catalog.order(catalog.alternating(5)) == 60
    assert catalog.order(catalog.linear(2, 7)) == 168
    assert catalog.order(catalog.suzuki(8)) == 29120
    assert catalog.order(catalog.unitary(3, 3)) == 6048
    assert catalog.order(catalog.sporadic("J1")) == 175560
    assert catalog.order(catalog.wreath(catalog.cyclic(3), 3)) == 81

def test_product_order_multiplies():
    a, b = catalog.linear(2, 8), catalog.dihedral(10)
    assert catalog.order(catalog.product(a, b)) == catalog.order(a) * catalog.order(b)

def test_borel_orders():
    assert catalog.borel_order(catalog.suzuki(8)) == 448
    assert catalog.borel_order(catalog.ree(27)) == 27 ** 3 * 26
    assert catalog.borel_order(catalog.g2(4)) == 4 ** 6 * 9
    assert catalog.borel_order(catalog.unitary(4, 2)) == 192
    assert catalog.borel_omega(catalog.e8(2)) == 120

@pytest.mark.parametrize("g", [
    catalog.linear(2, 11), catalog.linear(3, 4), catalog.unitary(3, 4), catalog.suzuki(32),
    catalog.g2(3), catalog.triality(2), catalog.symplectic(4, 5), catalog.unitary(4, 3),
])
def test_borel_divides_order(g):
    assert catalog.order(g) % catalog.borel_order(g) == 0
    assert catalog.borel_omega(g) == omega(catalog.borel_order(g))

def test_borel_unsupported():
    with pytest.raises(UnsupportedFamilyError):
        catalog.borel_order(catalog.sporadic("M11"))

def test_twisted_rank():
    assert catalog.twisted_rank(catalog.linear(2, 7)) == 1
    assert catalog.twisted_rank(catalog.suzuki(8)) == 1
    assert catalog.twisted_rank(catalog.e8(3)) == 8
    assert catalog.twisted_rank(catalog.unitary(5, 2)) == 2
    with pytest.raises(UnsupportedFamilyError):
        catalog.twisted_rank(catalog.alternating(7))

def test_aliases_normalize():
    a5 = catalog.normalize(catalog.alternating(5))
    assert catalog.normalize(catalog.linear(2, 5)) == a5
    assert catalog.normalize(catalog.linear(2, 4)) == a5
    assert catalog.normalize(catalog.linear(3, 2)) == catalog.linear(2, 7)
    assert catalog.normalize(catalog.linear(4, 2)) == catalog.alternating(8)
    assert catalog.normalize(catalog.alternating(6)) == catalog.linear(2, 9)
    assert catalog.normalize(catalog.symplectic(4, 3)) == catalog.unitary(4, 2)
    assert catalog.normalize(catalog.dihedral(6)) == catalog.symmetric(3)
    assert catalog.normalize(catalog.projective_general(2, 5)) == catalog.symmetric(5)

def test_alias_orders_agree():
    assert catalog.order(catalog.linear(2, 4)) == catalog.order(catalog.linear(2, 5)) == 60
    assert catalog.order(catalog.linear(3, 2)) == catalog.order(catalog.linear(2, 7))

def test_structure_predicates():
    assert catalog.is_simple(catalog.cyclic(7))
    assert not catalog.is_simple(catalog.cyclic(6))
    assert catalog.is_soluble(catalog.symmetric(4))
    assert not catalog.is_soluble(catalog.product(catalog.alternating(5), catalog.cyclic(2)))
    assert catalog.chief_length_soluble(catalog.dihedral(12)) == 3
    assert catalog.supersoluble_soluble(catalog.symmetric(4)) is False

def test_composition_factors():
    factors = catalog.composition_factors(catalog.symmetric(5))
    assert factors == [catalog.linear(2, 4), catalog.cyclic(2)]

def test_outer_orders():
    assert catalog.outer_order(catalog.linear(2, 9)) == 4
    assert catalog.outer_order(catalog.linear(2, 8)) == 3
    assert catalog.outer_order(catalog.sporadic("M11")) == 1

def test_iter_simple_groups_is_deterministic():
    first = list(catalog.iter_simple_groups(q_max=30, families=["L2"]))
    second = list(catalog.iter_simple_groups(q_max=30, families=["L2"]))
    assert first == second
    qs = [g.q for g in first]
    assert 7 in qs and 27 in qs
    assert 5 not in qs          # L(2,5) is the canonical A(5) = L(2,4)
    assert all(catalog.is_nonabelian_simple(g) for g in first)

def test_iter_simple_groups_needs_a_bound():
    with pytest.raises(ValueError):
        list(catalog.iter_simple_groups())
