"""
Length engine: exact l(G) where a closed formula or printed value applies,
certified intervals elsewhere, plus the length-at-most-9 classifier for
simple groups and the small-length structure rules for insoluble groups.
"""

import logging
import math

import catalog
from arithmetic import (binary_ones, congruence_class, is_prime, mod40_clause, omega,
                        pm, prime_power)
from catalog import GroupId
from enums import Family, LengthProvenance, Sign
from errors import (ArithmeticDomainError, GroupIdValidityError, InternalInconsistencyError,
                    NotCoveredError, UnsupportedFamilyError)
from model import LengthResult, ValueOrRange

logger = logging.getLogger(__name__)

ANCHOR_AN = "l(A_n) = floor((3n-1)/2) - (binary ones of n) - 1"
ANCHOR_L2_EVEN = "l(L2(q)) = Omega(q-1)+f+1 for even q"
ANCHOR_L2_ODD = "l(L2(q)) = max{Omega(q-1)+f, Omega(q+1)+1} for odd q, f >= 2"
ANCHOR_L2_PRIME = "l(L2(p)) = 1+max{Omega(p-1), Omega(p+1), 3 or 4 for maximal S4/A5}"
ANCHOR_L2_EXCEPTIONS = "l(L2(q)) = 5 for q in {7,11,19,29}; l(L2(5)) = 4"
ANCHOR_U3_EVEN = "l(U3(q)) = Omega(q^2-1)+3f+1-Omega((3,q+1)) for even q"
ANCHOR_U3_ODD = "l(U3(q)) = max{9, Omega(q+1)+l(L2(q))+1, Omega(q^2-q+1)+1} for prime q >= 13, q = 2 mod 3, Omega(q^2-1) = 6"
ANCHOR_L3_EVEN = "l(L3(q)) = 2 Omega(q-1)+3f+2-Omega((3,q-1)) for even q"
ANCHOR_L3_ODD = "l(L3(q)) >= l(L2(q))+2f+2+Omega(q-1)-Omega((3,q-1)) for odd q"
ANCHOR_PSP4_ODD = "l(PSp4(q)) >= l(SL2(q))+3f+1, and >= 3+2 l(L2(p)) for q = p odd"
ANCHOR_SZ = "l(2B2(q)) = Omega(q-1)+2f+1"
ANCHOR_BOREL = "l(G) >= Omega(|B|)+r for Lie type of twisted rank r"
ANCHOR_CHAR2 = "l(G) = Omega(|B|)+r+eps in characteristic 2, eps = 1 only for U_{2r+1}(2)"
ANCHOR_SOLUBLE = "l(G) = Omega(|G|) for soluble G"
ANCHOR_ADDITIVE = "l(G) = l(N)+l(G/N): length is the sum over composition factors"
ANCHOR_TITS = "l(2F4(2)') >= 13 through the soluble maximal subgroup 2.[2^8].5.4"
ANCHOR_TABLE5 = "simple groups of length at most 9"

# Printed values for groups with no closed formula.
PRINTED_LENGTHS: dict[str, tuple[int, str]] = {
    "J1": (6, "A7 and J1 have length 6"),
    "M11": (7, "M11, U3(3) and U3(5) have length 7"),
    "U(3,3)": (7, "M11, U3(3) and U3(5) have length 7"),
    "U(3,5)": (7, "M11, U3(3) and U3(5) have length 7"),
    "M12": (8, "M12 is the only sporadic group of length 8"),
    "L(3,3)": (8, "l(L3(3)) = 8"),
    "U(4,2)": (9, "l(PSp4(3)) = l(U4(2)) = 9"),
    "U(3,7)": (10, "l(U3(7)) = 10"),
    "U(3,11)": (9, "l(U3(11)) = 9"),
    "U(3,13)": (9, "l(U3(13)) = 9"),
    "U(3,29)": (9, "U3(q) has length 9 for q in {4,11,13,29}"),
}

L2_EXPLICIT = {
    5: {7, 8, 9, 11, 19, 27, 29},
    6: {25, 125},
    7: {16, 32, 49, 121, 169},
    9: {81, 128, 2187},
}
L2_PRIME_EXCEPTIONS = {7: 5, 11: 5, 19: 5, 29: 5}


def _result(value: int | ValueOrRange, provenance: LengthProvenance, *anchors: str) -> LengthResult:
    if isinstance(value, int):
        value = ValueOrRange.exact(value)
    return LengthResult(value, provenance, list(anchors))


def length_alternating(n: int) -> LengthResult:
    if n < 5:
        raise GroupIdValidityError(f"length_alternating needs n >= 5, got {n}; A(3), A(4) are soluble")
    return _result((3 * n - 1) // 2 - binary_ones(n) - 1, LengthProvenance.FORMULA_AN, ANCHOR_AN)


def maximal_s4_a5_bonus(p: int) -> int:
    """Length of the largest S4 or A5 maximal subgroup of L2(p): 4 when present, else 3."""
    return 4 if congruence_class(p, 8, pm(1)) or congruence_class(p, 10, pm(1)) else 3


def length_L2(q: int) -> LengthResult:
    try:
        p, f = prime_power(q)
    except ArithmeticDomainError as e:
        raise GroupIdValidityError(f"length_L2: {e}") from e
    if q < 4:
        raise GroupIdValidityError(f"length_L2 needs q >= 4, got {q}")
    if p == 2:
        return _result(omega(q - 1) + f + 1, LengthProvenance.FORMULA_L2_EVEN, ANCHOR_L2_EVEN)
    if f >= 2:
        value = max(omega(q - 1) + f, omega(q + 1) + 1)
        return _result(value, LengthProvenance.FORMULA_L2_ODD, ANCHOR_L2_ODD)
    if q == 5:
        return _result(4, LengthProvenance.FORMULA_L2_PRIME, ANCHOR_L2_EXCEPTIONS)
    if q in L2_PRIME_EXCEPTIONS:
        return _result(L2_PRIME_EXCEPTIONS[q], LengthProvenance.FORMULA_L2_PRIME, ANCHOR_L2_EXCEPTIONS)
    value = 1 + max(omega(q - 1), omega(q + 1), maximal_s4_a5_bonus(q))
    return _result(value, LengthProvenance.FORMULA_L2_PRIME, ANCHOR_L2_PRIME)


def length_L2_prime_upper(p: int) -> int:
    """The bound l(L2(p)) <= 1+max{4, Omega(p-1), Omega(p+1)} for primes p >= 5."""
    if p < 5 or not is_prime(p):
        raise ArithmeticDomainError(f"length_L2_prime_upper needs a prime p >= 5, got {p}")
    return 1 + max(4, omega(p - 1), omega(p + 1))


def _even_field(q: int, what: str) -> int:
    try:
        p, f = prime_power(q)
    except ArithmeticDomainError as e:
        raise GroupIdValidityError(f"{what}: {e}") from e
    if p != 2:
        raise GroupIdValidityError(f"{what} needs even q; odd q only has a lower bound, see length_bounds")
    return f


def length_U3_even(q: int) -> LengthResult:
    f = _even_field(q, "length_U3_even")
    if f < 2:
        raise GroupIdValidityError("length_U3_even needs q >= 4; U3(2) is soluble")
    value = omega(q * q - 1) + 3 * f + 1 - omega(math.gcd(3, q + 1))
    return _result(value, LengthProvenance.FORMULA_U3_EVEN, ANCHOR_U3_EVEN)


def length_L3_even(q: int) -> LengthResult:
    f = _even_field(q, "length_L3_even")
    value = 2 * omega(q - 1) + 3 * f + 2 - omega(math.gcd(3, q - 1))
    return _result(value, LengthProvenance.FORMULA_L3_EVEN, ANCHOR_L3_EVEN)


def length_Sz(q: int) -> LengthResult:
    catalog.validate(catalog.suzuki(q))
    _, f = prime_power(q)
    return _result(omega(q - 1) + 2 * f + 1, LengthProvenance.FORMULA_SZ, ANCHOR_SZ)


def _l2_length(q: int) -> int:
    """l(L2(q)) including the soluble cases q = 2, 3."""
    if q < 4:
        return omega(catalog.order(catalog.linear(2, q)))
    return length_L2(q).value.low


def _odd_lower_bounds(g: GroupId) -> int:
    """Sharper lower bounds from maximal parabolics and wreath-type subgroups, 0 when none apply."""
    p, f = catalog.lie_parameters(g)
    q = g.q
    if p == 2:
        return 0
    if g.family is Family.LINEAR and g.sign is Sign.PLUS and g.n == 3:
        return _l2_length(q) + 2 * f + 2 + omega(q - 1) - omega(math.gcd(3, q - 1))
    if g.family is Family.SYMPLECTIC and g.params[0] == 4:
        l_l2 = _l2_length(q)
        bound = l_l2 + 1 + 3 * f + 1
        if f == 1:
            bound = max(bound, 3 + 2 * l_l2)
        return bound
    return 0


def length_bounds(g: GroupId) -> ValueOrRange:
    g = catalog.normalize(g)
    if g.family is Family.LINEAR and g.sign is Sign.PLUS and g.n == 2:
        return length_L2(g.q).value
    if not catalog.is_lie_type(g):
        raise UnsupportedFamilyError(f"length_bounds needs a Lie-type id, got {catalog.render(g)}")
    p, _ = catalog.lie_parameters(g)
    r = catalog.twisted_rank(g)
    low = catalog.borel_omega(g) + r
    if p == 2:
        eps = 1 if (g.family is Family.LINEAR and g.sign is Sign.MINUS
                    and g.n % 2 == 1 and g.q == 2) else 0
        return ValueOrRange.exact(low + eps)
    return ValueOrRange.between(max(low, _odd_lower_bounds(g)), None)


def _u3_odd_prime(q: int) -> LengthResult | None:
    if not is_prime(q) or q < 13 or q % 3 != 2 or omega(q * q - 1) != 6:
        return None
    value = max(9, omega(q + 1) + length_L2(q).value.low + 1, omega(q * q - q + 1) + 1)
    if u3_length9_conditions(q):
        return _result(value, LengthProvenance.TABLE5_FAMILY, ANCHOR_U3_ODD, ANCHOR_TABLE5)
    return _result(value, LengthProvenance.PAPER_PRINTED, ANCHOR_U3_ODD)


def u3_length9_conditions(q: int) -> bool:
    """Prime-q conditions for l(U3(q)) = 9 beyond the explicit list {4,11,13,29}."""
    return (is_prime(q) and omega(q - 1) == 3 and omega(q + 1) == 3
            and omega(q * q - q + 1) <= 8 and q % 3 == 2 and mod40_clause(q))


def _simple_length(g: GroupId) -> LengthResult:
    fam = g.family
    name = catalog.render(g)
    if fam is Family.ALTERNATING:
        return length_alternating(g.n)
    if fam is Family.LINEAR and g.sign is Sign.PLUS and g.n == 2:
        return length_L2(g.q)
    if name in PRINTED_LENGTHS:
        value, anchor = PRINTED_LENGTHS[name]
        return _result(value, LengthProvenance.PAPER_PRINTED, anchor)
    if fam is Family.TITS:
        return _result(ValueOrRange.between(13, None), LengthProvenance.PAPER_PRINTED, ANCHOR_TITS)
    if fam is Family.SPORADIC:
        raise NotCoveredError(f"No printed length for {name}")
    if fam is Family.SUZUKI:
        return length_Sz(g.q)
    if fam is Family.LINEAR and g.n == 3:
        q = g.q
        if q % 2 == 0:
            return length_U3_even(q) if g.sign is Sign.MINUS else length_L3_even(q)
        if g.sign is Sign.MINUS:
            printed = _u3_odd_prime(q)
            if printed is not None:
                return printed
    bounds = length_bounds(g)
    if bounds.is_exact:
        return _result(bounds, LengthProvenance.FORMULA_CHAR2, ANCHOR_CHAR2)
    anchors = [ANCHOR_BOREL]
    if _odd_lower_bounds(g) == bounds.low:
        anchors.append(ANCHOR_L3_ODD if g.family is Family.LINEAR else ANCHOR_PSP4_ODD)
    return _result(bounds, LengthProvenance.BOREL_LOWER_BOUND, *anchors)


def _check_against_bounds(g: GroupId, result: LengthResult) -> None:
    if not catalog.is_lie_type(g) or not result.value.is_exact:
        return
    bounds = length_bounds(g)
    if not bounds.contains(result.value.value):
        raise InternalInconsistencyError(
            f"l({catalog.render(g)}) = {result.value} lies outside the Borel bounds {bounds}")


def length_of(g: GroupId) -> LengthResult:
    canon = catalog.normalize(g)
    if catalog.is_soluble(canon):
        return _result(omega(catalog.order(canon)), LengthProvenance.SOLUBLE_OMEGA, ANCHOR_SOLUBLE)
    if catalog.is_nonabelian_simple(canon):
        result = _simple_length(canon)
        _check_against_bounds(canon, result)
        return result
    simple = catalog.nonabelian_factors(canon)
    total = ValueOrRange.exact(0)
    anchors = [ANCHOR_ADDITIVE]
    for t in simple:
        part = _simple_length(t)
        total = total + part.value
        anchors.extend(a for a in part.anchors if a not in anchors)
    rest = catalog.order(canon) // math.prod(catalog.order(t) for t in simple)
    total = total + omega(rest)
    result = _result(total, LengthProvenance.ADDITIVITY, *anchors)
    shaped = small_length_insoluble(canon)
    if shaped is not None and total.is_exact and shaped != total.value:
        raise InternalInconsistencyError(
            f"{catalog.render(canon)}: additivity gives {total}, small-length rules give {shaped}")
    return result


# --- Length at most 9 ---

def _l2_table5_length(q: int) -> int | None:
    p, f = prime_power(q)
    if q == 4:
        return 4
    for value, qs in L2_EXPLICIT.items():
        if q in qs:
            return value
    if p == 2:
        return None
    om, op = omega(q - 1), omega(q + 1)
    if f == 1:
        m = max(om, op)
        if m == 3 and q > 5 and mod40_clause(q):
            return 4
        if 4 <= m <= 8:
            return m + 1
        return None
    rows = {
        2: [(8, om == 6 and op <= 7), (9, om == 7 and op <= 8), (9, om == 6 and op == 8)],
        3: [(7, om == 4 and op <= 6), (8, om == 5 and op <= 7), (8, om <= 4 and op == 7),
            (9, om == 6 and op <= 8), (9, om <= 5 and op == 8)],
        5: [(8, om == 3 and op <= 7), (9, om == 4 and op <= 8), (9, om == 3 and op == 8)],
    }
    for value, holds in rows.get(f, []):
        if holds:
            return value
    return None


TABLE5_NAMED: dict[str, int] = {
    "A(7)": 6, "J1": 6, "M11": 7, "U(3,3)": 7, "U(3,5)": 7, "M12": 8, "Sz(8)": 8, "L(3,3)": 8,
    "A(8)": 9, "U(4,2)": 9, "L(3,4)": 9, "U(3,4)": 9, "U(3,11)": 9, "U(3,13)": 9, "U(3,29)": 9,
}


def table5_length(g: GroupId) -> int | None:
    """l(G) when the simple group G is in the length-at-most-9 classification, else None."""
    canon = catalog.normalize(g)
    if not catalog.is_nonabelian_simple(canon):
        return None
    if canon.family is Family.LINEAR and canon.sign is Sign.PLUS and canon.n == 2:
        return _l2_table5_length(canon.q)
    name = catalog.render(canon)
    if name in TABLE5_NAMED:
        return TABLE5_NAMED[name]
    if canon.family is Family.LINEAR and canon.sign is Sign.MINUS and canon.n == 3:
        return 9 if u3_length9_conditions(canon.q) else None
    return None


def small_length_insoluble(g: GroupId) -> int | None:
    """Length of an insoluble group of length 4, 5 or 6 recognised by its shape, else None.

    Shapes: a simple group from the first three length rows; T x C_p, p.T or
    T.p over a simple T of length 4 or 5; L2(q) x (p.r) and SL2(q) x C_p over
    L2(q) of length 4.
    """
    canon = catalog.normalize(g)
    if catalog.is_soluble(canon):
        return None
    if catalog.is_nonabelian_simple(canon):
        value = table5_length(canon)
        return value if value is not None and value <= 6 else None
    simple = catalog.nonabelian_factors(canon)
    if len(simple) != 1:
        return None
    base = table5_length(simple[0])
    if base is None or base > 5:
        return None
    extra = omega(catalog.order(canon) // catalog.order(simple[0]))
    fam = canon.family
    if fam is Family.PRODUCT:
        if extra == 1:
            return base + 1
        # L2(q) x (p.r) and SL2(q) x C_p
        return 6 if base == 4 and extra == 2 else None
    if extra == 1 and fam in (Family.CENTRAL, Family.EXTENSION, Family.SPECIAL_LINEAR,
                              Family.PROJECTIVE_GENERAL, Family.SYMMETRIC):
        return base + 1
    if base == 4 and extra == 2 and fam in (Family.CENTRAL, Family.EXTENSION):
        # (L2(q) x p).2 and 2.L2(q).2
        return 6
    return None
