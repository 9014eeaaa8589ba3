import pytest

import catalog
import chains
import depth
import primes
from arithmetic import is_prime, omega
from errors import ArithmeticDomainError
from primes import CONDITIONS, OmegaWindow, PolyTerm


FIRST_TEN = [13, 43, 67, 173, 283, 317, 653, 787, 907, 1867]


def test_table5_row1_first_ten():
    assert primes.search("table5-row1", 2000) == FIRST_TEN

@pytest.mark.parametrize("name,limit,expected", [
    ("cd2-min2", 563, [23, 59, 83, 227, 347, 563]),
    ("fifth-power-l8", 1187, [3, 7, 23, 83, 263, 1187]),
    ("cube-l7", 28163, [7, 11, 83, 1523, 20507, 28163]),
    ("u3-l9", 3677, [173, 317, 653, 2693, 3413, 3677]),
])
def test_published_prime_lists(name, limit, expected):
    assert primes.search(name, limit) == expected

@pytest.mark.slow
def test_cube_depth5_smallest_member():
    assert primes.search("cube-depth5", 433373) == [433373]

def test_u3_length9_family():
    assert primes.u3_length9_family(4000) == [173, 317, 653, 2693, 3413, 3677]
    assert primes.u3_length9_family(100) == []
    assert 29 not in primes.u3_length9_family(200)

def test_sharded_search_matches_serial():
    serial = primes.search("table5-row1", 5000)
    assert primes.search("table5-row1", 5000, jobs=2, block_size=500) == serial
    assert primes.search("table5-row1", 5000, jobs=1, block_size=77) == serial

def test_blocks_cover_range():
    assert primes.blocks(10, 4) == [(2, 5), (6, 9), (10, 10)]
    with pytest.raises(ValueError):
        primes.blocks(10, 0)

def test_search_rejects_small_limit():
    with pytest.raises(ArithmeticDomainError):
        primes.search("table5-row1", 1)

def test_unknown_condition():
    with pytest.raises(ValueError, match="Unknown prime condition"):
        primes.get_condition("no-such-row")

def test_every_condition_has_an_anchor():
    assert all(cond.anchor for cond in CONDITIONS.values())
    assert "table5-row1" in CONDITIONS
    assert "appendix" in CONDITIONS


# --- Records ---

def test_search_records_carry_witnesses():
    records = primes.search_records("table5-row1", 50)
    assert [r.p for r in records] == [13, 43]
    first = records[0]
    assert first.condition == "table5-row1"
    assert first.witnesses["p mod 40"] == "13"
    assert first.witnesses["p-1"] == "2^2·3"
    assert first.witnesses["p+1"] == "2·7"

def test_appendix_family():
    family = primes.appendix_family(200)
    assert [r.p for r in family] == [5, 149]
    rec = family[1]
    assert rec.quotient == "5^2·37"
    assert rec.omega_quotient == 3
    assert (rec.omega_minus, rec.omega_plus) == (3, 4)
    assert (rec.gcd_minus, rec.gcd_plus) == (4, 6)
    assert rec.divisible_by_24
    assert rec.max_omega_ok

def test_appendix_family_rejects_small_limit():
    with pytest.raises(ArithmeticDomainError):
        primes.appendix_family(4)

def test_appendix_members_are_5_mod_72():
    for rec in primes.appendix_family(20_000):
        assert rec.p % 72 == 5
        assert rec.omega_quotient <= 7

def _check_appendix_deductions(rec):
    p = rec.p
    assert rec.divisible_by_24 and (p * p - 1) % 24 == 0
    assert rec.max_omega_ok and max(omega(p - 1), omega(p + 1)) <= 8
    assert (rec.gcd_minus, rec.gcd_plus) == (4, 6)
    assert rec.omega_minus_part == omega((p - 1) // 4)
    assert rec.omega_plus_part == omega((p + 1) // 6)
    assert rec.omega_minus_part + rec.omega_plus_part == rec.omega_quotient
    if p > 5:
        assert rec.omega_minus_part >= 1
    assert rec.split_ok

def test_appendix_deductions_hold_for_every_member():
    family = primes.appendix_family(10 ** 6)
    assert family
    for rec in family:
        _check_appendix_deductions(rec)

def test_appendix_record_split_for_149():
    rec = primes.appendix_record(149)
    assert (rec.omega_minus_part, rec.omega_plus_part) == (1, 2)
    assert rec.split_ok

def test_appendix_record_for_5_has_empty_split():
    rec = primes.appendix_record(5)
    assert (rec.omega_minus_part, rec.omega_plus_part, rec.omega_quotient) == (0, 0, 0)
    assert rec.split_ok

def test_appendix_sharded_matches_serial():
    serial = primes.appendix_family(10 ** 6)
    sharded = primes.appendix_family(10 ** 6, jobs=4, block_size=1 << 15)
    assert sharded == serial

@pytest.mark.slow
def test_appendix_family_below_ten_million():
    family = primes.appendix_family(10 ** 7, jobs=4)
    assert len(family) >= 40
    assert [r.p for r in family] == sorted(r.p for r in family)
    for rec in family:
        assert rec.p % 72 == 5 and rec.omega_quotient <= 7
        _check_appendix_deductions(rec)


# --- Building blocks ---

def test_poly_term_factors_once():
    term = PolyTerm.of("p**3-1")
    assert term.degree == 3
    assert len(term.factors) == 2
    assert term.value(7) == 342
    assert term.omega(7) == omega(342)

def test_poly_term_divisor():
    term = PolyTerm.of("p**2-1", 24)
    assert term.label == "(p**2-1)/24"
    assert term.value(149) == 925
    assert term.omega(149) == 3
    assert not term.divides(2)
    with pytest.raises(ArithmeticDomainError):
        term.value(2)

def test_poly_term_stops_early():
    term = PolyTerm.of("p**4-1")
    full = term.omega(97)
    assert term.omega(97, stop_at=2) >= 2
    assert term.omega(97, stop_at=full + 1) == full

def test_omega_window_matches_omega():
    window = OmegaWindow.around(100, 200)
    assert window.get(150) == omega(150)
    assert window.get(201) == omega(201)
    assert window.get(10_000) is None


# --- Agreement with the group engines ---

def test_cd1_conditions_match_cd1_predicate():
    cond_i, cond_ii = CONDITIONS["cd1-i"], CONDITIONS["cd1-ii"]
    for p in range(7, 3000):
        if is_prime(p):
            by_search = cond_i.holds(p) or cond_ii.holds(p)
            assert by_search == chains.cd1_simple(catalog.linear(2, p)), p

def test_cr_equality_condition_matches_predicate():
    cond = CONDITIONS["cr-equality"]
    for p in range(31, 3000):
        if is_prime(p):
            assert cond.holds(p) == chains.cr5over4_equality(catalog.linear(2, p)), p

def test_depth3_alternating_matches_depth_rules():
    cond = CONDITIONS["depth3-alternating"]
    for p in range(5, 2000):
        if is_prime(p):
            assert cond.holds(p) == depth.depth3_simple(catalog.alternating(p)), p
