"""
Depth engine.

depth_of() collects every rule that applies to a group (classification rows,
the L2(p) and L2(p^3) dichotomies, printed values, chief-length bounds and
upper bounds from explicit unrefinable chains) and settles them: all exact
rules must agree and every interval must contain the answer, otherwise the
engine raises InternalInconsistencyError instead of picking a winner.

The membership predicates for the four depth classification tables live here
as well, since the engine uses them as rules.
"""

import logging
import math
from dataclasses import dataclass

import catalog
from arithmetic import (MOD40_TABLE3, congruence_class, factorize, is_prime, mod40_clause,
                        omega, pm, prime_power)
from catalog import GroupId
from enums import DepthProvenance, Family, Sign
from errors import (ArithmeticDomainError, GroupIdValidityError, InternalInconsistencyError,
                    NotCentralExtensionError, NotCoveredError, NotSimpleError,
                    UnsupportedFamilyError)
from model import DepthResult, ValueOrRange

logger = logging.getLogger(__name__)

ANCHOR_TABLE1 = "simple groups of depth 3: A_p, L2(q), L_n^eps(q), 2B2(q), M23 and B under their row conditions"
ANCHOR_NOT_TABLE1 = "a simple group outside the depth-3 list has depth >= 4"
ANCHOR_NONSIMPLE = "an insoluble group of depth 3 is simple, and depth(G) >= chiefl(G)+2 for insoluble G"
ANCHOR_KOHLER = "depth(G) = chiefl(G) for soluble G"
ANCHOR_L2P = "depth(L2(p)) = 3 iff min{Omega(p-1), Omega(p+1)} = 2 or p = ±3, ±13 mod 40, else 4"
ANCHOR_L2P3 = "depth(L2(p^3)) = 4 iff min{Omega(p-1), Omega(p+1)} = 2 or p = ±3, ±13 mod 40, else 5; depth(L2(27)) = 3"
ANCHOR_L2P2 = "depth(L2(p^2)) <= 6 through PGL2(p); = 6 iff Omega(q±1) >= 5, p = ±1 mod 10 and depth(L2(p)) = 4"
ANCHOR_L2P2_SMALL = "cd(L2(p^2)) >= 3 for p in {5,7,11,13}"
ANCHOR_TABLE4 = "simple groups of depth 4 with a soluble maximal subgroup of depth 3"
ANCHOR_TABLE3 = "almost simple T.p with depth(T.p) = depth(T) = 4"
ANCHOR_ALMOST_SIMPLE = "T.p has depth 4 when depth(T) = 3; other almost simple groups of depth 4 are the T.p rows"
ANCHOR_PRIME_FACTOR = "depth(G) = depth(G/N)+1 for N normal of prime order"
ANCHOR_SECTION = "depth(G/N) <= depth(G) <= depth(N)+depth(G/N)"
ANCHOR_TT = "T x T has depth 4 for T simple of depth 3; depth(T x T) <= depth(T)+1 through the diagonal"
ANCHOR_PRODUCT_DEPTH4 = "a direct product of two insoluble groups has depth 4 only as T x T with depth(T) = 3"
ANCHOR_WREATH = "depth(H^p.p) >= depth(H)+2 for soluble H"
ANCHOR_DIHEDRAL_ODD = "D_{q-1} and D_{q+1} are maximal in L2(q) for odd q >= 13"
ANCHOR_DIHEDRAL_EVEN = "D_{2(q-1)} and D_{2(q+1)} are maximal in L2(q) for even q"
ANCHOR_SUBFIELD_EVEN = "depth(L2(2^f)) <= Omega(q-1)+Omega(f)+1 through subfield subgroups"
ANCHOR_SUBFIELD_ODD = "depth(L2(p^f)) <= Omega(f)+depth(L2(p)) for odd f, 2 Omega(f)+depth(L2(p)) for even f"
ANCHOR_ALTERNATING = "depth(A_n) <= 23, and <= 6 for n < 23 with equality only at n = 16"
ANCHOR_SZ = "depth(2B2(q)) <= Omega(q-1)+2 through D_{2(q-1)}"
ANCHOR_REE = "depth(2G2(q)) <= Omega(q-1)+3 through 2 x L2(q), and <= Omega(f)+4"
ANCHOR_G2 = "depth(G2(q)) <= Omega(f)+6 for q > 2"
ANCHOR_3D4 = "depth(3D4(q)) <= Omega(f)+7"
ANCHOR_2F4 = "depth(2F4(q)) <= Omega(f)+5 for f > 1"
ANCHOR_EXCEPTIONAL = "depth <= 3 Omega(f)+36 for the remaining exceptional groups; depth(E6^eps(p)) <= 10"
ANCHOR_L3_ODD = "L3(p) > SO3(p) = PGL2(p) for odd p, so depth(L3(p)) <= 6 and depth(L3(p^2)) <= 8"
ANCHOR_U3_ODD = "U3(p) > PSO3(p) > Omega3(p) is unrefinable, so depth(U3(p)) <= 6"
ANCHOR_U3_FIELD = "depth(U3(p^f)) <= 8 for f in {2,3,5} and <= 10 for f = 4"
ANCHOR_CLASSICAL = "subfield and maximal-subgroup chains bound the depth of small-rank classical groups"
ANCHOR_U74 = "U7(4) has a maximal subgroup 3277:7 of depth 3"

# Values stated outright, keyed by the canonical rendering.
DEPTH_PRINTED: dict[str, tuple[int, str]] = {
    "L(2,9)": (4, "cr(A6) = 5/4 with l(A6) = 5"),
    "A(7)": (4, "cd(A7) = 2 with l(A7) = 6"),
    "A(8)": (5, "cd(A8) = 4 with l(A8) = 9"),
    "A(11)": (4, ANCHOR_TABLE3),
    "A(16)": (6, ANCHOR_ALTERNATING),
    "L(3,4)": (4, ANCHOR_TABLE3),
    "L(4,3)": (5, "depth(L4(p)) = 5 for p = 2, 3"),
    "U(3,3)": (4, "U3(3) = G2(2)' has depth 4 and length 7"),
    "U(3,5)": (5, "cd(U3(5)) = 2 with l(U3(5)) = 7"),
    "U(4,2)": (5, "depth(U4(2)) = depth(U4(4)) = 5"),
    "U(4,4)": (5, "depth(U4(2)) = depth(U4(4)) = 5"),
    "U(4,5)": (5, "depth(U4(5)) = 5"),
    "J3": (5, "J3 < U9(2) is maximal and depth(J3) = 5"),
    catalog.TITS_TOKEN: (4, "the Tits group has depth 4"),
    "M": (4, "the Monster has depth 4 through its maximal subgroup L2(59)"),
}

# Sporadic groups of depth 4 with a simple maximal subgroup of depth 3.
SPORADIC_DEPTH4 = frozenset({"M11", "M12", "M22", "M24", "J1", "J2", "Suz", "Co2", "Co3", "Fi23", "Th"})
# n <= 100 with A_n of depth 4 through a simple maximal subgroup of depth 3.
ALTERNATING_DEPTH4 = frozenset({6, 7, 13, 14, 23, 31, 38, 44, 48, 54, 60, 62, 65, 68, 74, 78, 84, 88})

TABLE1_LINEAR_EXCLUDED = {(3, 4, Sign.PLUS), (3, 3, Sign.MINUS), (3, 5, Sign.MINUS), (5, 2, Sign.MINUS)}
TABLE2_SL_EXCLUDED = {(3, 4, Sign.PLUS), (3, 5, Sign.MINUS)}
TABLE3_ROWS: dict[int, frozenset[str]] = {
    2: frozenset({"L(2,9)", "A(7)", "A(11)", "A(23)"}),
    3: frozenset({"L(3,4)", "U(3,5)"}),
}
# Generic T.p ids that name more than one group (A6.2 is S6, PGL2(9) or M10).
AMBIGUOUS_EXTENSIONS = {("L(2,9)", 2)}
TABLE4_SPORADIC: dict[str, tuple[str, ...]] = {
    "J1": ("7:6", "11:10", "19:6", "2^3:7:3"),
    "J4": ("43:14",),
    "Ly": ("67:22",),
    "Fi24'": ("29:14",),
    "Th": ("31:15",),
}


@dataclass(frozen=True)
class _Rule:
    value: ValueOrRange
    provenance: DepthProvenance
    anchor: str


def _upper(high: int, provenance: DepthProvenance, anchor: str) -> _Rule:
    return _Rule(ValueOrRange.between(3, high), provenance, anchor)


def _is_l2(g: GroupId) -> bool:
    return g.family is Family.LINEAR and g.sign is Sign.PLUS and g.n == 2


def _require_simple(g: GroupId, what: str) -> GroupId:
    canon = catalog.normalize(g)
    if not catalog.is_nonabelian_simple(canon):
        raise NotSimpleError(f"{what} expects a non-abelian simple group, got {catalog.render(g)}")
    return canon


def linear_quotient(n: int, q: int, sign: Sign) -> int:
    """(q^n - eps) / ((q - eps)(n, q - eps)) for odd n."""
    eps = sign.value_int
    return (q ** n - eps) // ((q - eps) * math.gcd(n, q - eps))


# --- Depth-3 simple groups ---

def _alternating_row(n: int) -> bool:
    return n % 2 == 1 and is_prime(n) and is_prime((n - 1) // 2) and n not in (7, 11, 23)


def _l2_row(q: int) -> bool:
    d = math.gcd(2, q - 1)
    if q != 9 and (is_prime((q + 1) // d) or is_prime((q - 1) // d)):
        return True
    if is_prime(q) and mod40_clause(q):
        return True
    p, k = prime_power(q)
    return p == 3 and k >= 3 and is_prime(k)


def _linear_row(g: GroupId) -> bool:
    n, q = g.params
    if n < 3 or not is_prime(n) or (n, q, g.sign) in TABLE1_LINEAR_EXCLUDED:
        return False
    return is_prime(linear_quotient(n, q, g.sign))


def depth3_simple(g: GroupId) -> bool:
    """True iff the simple group g is one of the simple groups of depth 3."""
    canon = _require_simple(g, "depth3_simple")
    fam = canon.family
    if fam is Family.ALTERNATING:
        return _alternating_row(canon.n)
    if _is_l2(canon):
        return _l2_row(canon.q)
    if fam is Family.LINEAR:
        return _linear_row(canon)
    if fam is Family.SUZUKI:
        return is_prime(canon.q - 1)
    if fam is Family.SPORADIC:
        return canon.name in ("M23", "B")
    return False


# --- Dichotomies ---

def depth_L2_prime(p: int) -> DepthResult:
    """Exact depth of L2(p), p prime >= 5 (for p = 5, 7, 11 it agrees with the depth-3 list)."""
    if p < 5 or not is_prime(p):
        raise ArithmeticDomainError(f"depth_L2_prime needs a prime p >= 5, got {p}")
    shallow = min(omega(p - 1), omega(p + 1)) == 2 or mod40_clause(p)
    return DepthResult(ValueOrRange.exact(3 if shallow else 4), DepthProvenance.L2P_DICHOTOMY, [ANCHOR_L2P])


def depth_L2_pcubed(p: int) -> DepthResult:
    if p < 3 or not is_prime(p):
        raise ArithmeticDomainError(f"depth_L2_pcubed needs a prime p >= 3, got {p}")
    if p == 3:
        value = 3
    else:
        value = 4 if min(omega(p - 1), omega(p + 1)) == 2 or mod40_clause(p) else 5
    return DepthResult(ValueOrRange.exact(value), DepthProvenance.L2P3_DICHOTOMY, [ANCHOR_L2P3])


def _l2_prime_depth(p: int) -> int:
    """depth(L2(p)) with the soluble L2(2) = S3 and L2(3) = A4 at chief length 2."""
    if p <= 3:
        return 2
    return depth_L2_prime(p).value.value


# --- Quasisimple groups of depth 4 ---

def _sl2_row(q: int) -> bool:
    return q % 2 == 1 and _l2_row(q)


def _sl_row(n: int, q: int, sign: Sign) -> bool:
    if n == 2:
        return _sl2_row(q)
    eps = sign.value_int
    if not is_prime(n) or math.gcd(n, q - eps) != n or (n, q, sign) in TABLE2_SL_EXCLUDED:
        return False
    return is_prime((q ** n - eps) // (n * (q - eps)))


def quasisimple_depth4(g: GroupId) -> bool:
    """Membership of a quasisimple group with non-trivial centre in the depth-4 list."""
    fam = g.family
    if fam is Family.SPECIAL_LINEAR:
        n, q = g.params
        sign = Sign.PLUS if n == 2 else g.sign
        if math.gcd(n, q - sign.value_int) == 1:
            raise NotCentralExtensionError(f"{catalog.render(g)} has trivial centre")
        return _sl_row(n, q, sign)
    if fam is not Family.CENTRAL:
        raise NotCentralExtensionError(f"{catalog.render(g)} is not a central extension id")
    p = g.params[0]
    base = catalog.normalize(g.parts[0])
    if not catalog.is_nonabelian_simple(base):
        raise NotCentralExtensionError(f"{catalog.render(g)}: the quotient by the centre is not simple")
    if base.family is Family.ALTERNATING:
        return p == 2 and _alternating_row(base.n)
    if _is_l2(base):
        # 2.A5 = SL2(5) and 2.A6 = SL2(9)
        q = 5 if base.q == 4 else base.q
        return p == 2 and _sl2_row(q)
    if base.family is Family.LINEAR:
        n, q = base.params
        return p == n and _sl_row(n, q, base.sign)
    if base == catalog.suzuki(8) or base == catalog.sporadic("B"):
        return p == 2
    return False


# --- Almost simple groups of depth 4 ---

def table3_membership(t: GroupId, ext: int) -> bool:
    """True iff some almost simple T.ext has depth(T.ext) = depth(T) = 4."""
    if not is_prime(ext):
        return False
    canon = catalog.normalize(t)
    if catalog.render(canon) in TABLE3_ROWS.get(ext, ()):
        return True
    if ext == 2 and _is_l2(canon):
        q = canon.q
        return (is_prime(q) and congruence_class(q, 40, MOD40_TABLE3)
                and omega(q - 1) >= 3 and omega(q + 1) >= 3)
    return False


def _l2_condition_block(q: int) -> bool:
    """The three-part condition on odd q attached to the L2 rows of the soluble-maximal list."""
    if omega(q - 1) < 3 or omega(q + 1) < 3:
        return False
    if is_prime(q) and mod40_clause(q):
        return False
    p, k = prime_power(q)
    return not (p == 3 and k >= 3 and is_prime(k))


def _table4_l2(q: int) -> list[str]:
    p, _ = prime_power(q)
    rows: list[str] = []
    if p == 2:
        om, op = omega(q - 1), omega(q + 1)
        if om == 2 and op >= 2:
            rows.extend([f"F{q}:{q - 1}", f"D{2 * (q - 1)}"])
        if op == 2 and om >= 2:
            rows.append(f"D{2 * (q + 1)}")
        return rows
    if not _l2_condition_block(q):
        return rows
    if omega(q - 1) == 3:
        rows.extend([f"F{q}:{(q - 1) // 2}", f"D{q - 1}"])
    if omega(q + 1) == 3:
        rows.append(f"D{q + 1}")
    if is_prime(q) and congruence_class(q, 8, pm(1)):
        rows.append("S4")
    return rows


def table4_membership(g: GroupId) -> list[str]:
    """Soluble maximal subgroups of depth 3 that make the simple group g a depth-4 group."""
    canon = catalog.normalize(g)
    if not catalog.is_nonabelian_simple(canon):
        return []
    fam = canon.family
    if catalog.render(canon) == "L(2,9)":
        return ["S4", "3^2:4"]
    if fam is Family.ALTERNATING:
        p = canon.n
        return [f"{p}:{(p - 1) // 2}"] if is_prime(p) and omega(p - 1) == 3 else []
    if _is_l2(canon):
        return _table4_l2(canon.q)
    if fam is Family.LINEAR:
        n, q = canon.params
        eps = canon.sign.value_int
        rows = []
        if n == 3 and q >= 8 and q % 2 == 0 and is_prime(q - eps) and omega(q * q + eps * q + 1) >= 2:
            rows.append(f"({q - eps})^2:S3")
        if is_prime(n) and n >= 3:
            quotient = linear_quotient(n, q, canon.sign)
            if omega(quotient) == 2:
                rows.append(f"{quotient}:{n}")
        return rows
    if fam is Family.SUZUKI:
        q = canon.q
        rows = []
        if omega(q - 1) == 2:
            rows.append(f"D{2 * (q - 1)}")
        s = math.isqrt(2 * q)
        for x in (q + s + 1, q - s + 1):
            if is_prime(x) and omega(q - 1) >= 2:
                rows.append(f"{x}:4")
        return rows
    if fam is Family.REE:
        q = canon.q
        s = math.isqrt(3 * q)
        return [f"{x}:6" for x in (q + s + 1, q - s + 1) if is_prime(x) and q > 3]
    if fam is Family.TRIALITY:
        x = canon.q ** 4 - canon.q ** 2 + 1
        return [f"{x}:4"] if is_prime(x) else []
    if fam is Family.SPORADIC:
        return list(TABLE4_SPORADIC.get(canon.name, ()))
    return []


# --- Chief length ---

def chief_length(g: GroupId) -> ValueOrRange:
    """Chief length of a catalog id; an interval when the structure does not pin it."""
    canon = catalog.normalize(g)
    if catalog.is_soluble(canon):
        known = catalog.chief_length_soluble(canon)
        if known is not None:
            return ValueOrRange.exact(known)
        n = catalog.order(canon)
        return ValueOrRange.between(len(factorize(n).factors), omega(n))
    if catalog.is_nonabelian_simple(canon):
        return ValueOrRange.exact(1)
    fam = canon.family
    if fam is Family.PRODUCT:
        total = ValueOrRange.exact(0)
        for part in canon.parts:
            total = total + chief_length(part)
        return total
    if fam is Family.CENTRAL:
        return chief_length(canon.parts[0]) + 1
    if fam in (Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL):
        n, q = canon.params
        return ValueOrRange.exact(1 + omega(math.gcd(n, q - canon.sign.value_int)))
    if fam is Family.SYMMETRIC:
        return ValueOrRange.exact(2)
    if fam in (Family.EXTENSION, Family.WREATH):
        base = canon.parts[0]
        if catalog.is_nonabelian_simple(base):
            return ValueOrRange.exact(2)
        inner = chief_length(base)
        factor = 1 if fam is Family.EXTENSION else canon.params[0]
        return ValueOrRange.between(2, None if inner.high is None else factor * inner.high + 1)
    raise NotCoveredError(f"No chief-length rule for {catalog.render(canon)}")


# --- Rule collection ---

def _settle(g: GroupId, rules: list[_Rule]) -> DepthResult:
    name = catalog.render(g)
    exact = [r for r in rules if r.value.is_exact]
    for other in exact[1:]:
        if other.value.value != exact[0].value.value:
            raise InternalInconsistencyError(
                f"depth({name}): {exact[0].provenance.value} gives {exact[0].value}, "
                f"{other.provenance.value} gives {other.value}")
    combined = rules[0].value
    for rule in rules[1:]:
        try:
            combined = combined.intersect(rule.value)
        except InternalInconsistencyError as e:
            raise InternalInconsistencyError(
                f"depth({name}): {rule.provenance.value} gives {rule.value}, "
                f"which misses {combined}") from e
    if exact:
        chosen = exact
    else:
        chosen = [r for r in rules if r.value.low == combined.low
                  or (r.value.high is not None and r.value.high == combined.high)]
    provenance = chosen[0].provenance
    if not exact and combined.high is not None:
        provenance = next(r.provenance for r in rules if r.value.high == combined.high)
    anchors = list(dict.fromkeys(r.anchor for r in chosen))
    logger.debug("[DepthEngine] %s -> %s (%s)", name, combined, provenance.value)
    return DepthResult(combined, provenance, anchors)


def _printed_rule(g: GroupId) -> _Rule | None:
    name = catalog.render(g)
    if name in DEPTH_PRINTED:
        value, anchor = DEPTH_PRINTED[name]
        return _Rule(ValueOrRange.exact(value), DepthProvenance.PAPER_PRINTED, anchor)
    if g.family is Family.SPORADIC and name in SPORADIC_DEPTH4:
        return _Rule(ValueOrRange.exact(4), DepthProvenance.PAPER_PRINTED,
                     "sporadic groups of depth 4 with a simple maximal subgroup of depth 3")
    if g.family is Family.ALTERNATING and g.n in ALTERNATING_DEPTH4:
        return _Rule(ValueOrRange.exact(4), DepthProvenance.PAPER_PRINTED,
                     "A_n of depth 4 with a simple maximal subgroup of depth 3, n <= 100")
    return None


def _l2_rules(q: int) -> list[_Rule]:
    p, f = prime_power(q)
    rules: list[_Rule] = []
    if f == 1 and q >= 5:
        found = depth_L2_prime(q)
        rules.append(_Rule(found.value, found.provenance, found.anchors[0]))
    if f == 3 and p >= 3:
        found = depth_L2_pcubed(p)
        rules.append(_Rule(found.value, found.provenance, found.anchors[0]))
    if p == 2:
        rules.append(_upper(omega(q - 1) + 2, DepthProvenance.MAXIMAL_UPPER, ANCHOR_DIHEDRAL_EVEN))
        rules.append(_upper(omega(q + 1) + 2, DepthProvenance.MAXIMAL_UPPER, ANCHOR_DIHEDRAL_EVEN))
        rules.append(_upper(omega(q - 1) + omega(f) + 1, DepthProvenance.SUBFIELD_UPPER,
                            ANCHOR_SUBFIELD_EVEN))
        return rules
    if q >= 13:
        rules.append(_upper(min(omega(q - 1), omega(q + 1)) + 1, DepthProvenance.MAXIMAL_UPPER,
                            ANCHOR_DIHEDRAL_ODD))
    if f >= 2:
        steps = 2 * omega(f) if f % 2 == 0 else omega(f)
        rules.append(_upper(steps + _l2_prime_depth(p), DepthProvenance.SUBFIELD_UPPER,
                            ANCHOR_SUBFIELD_ODD))
    if f == 2 and p >= 5:
        deepest = (omega(q - 1) >= 5 and omega(q + 1) >= 5
                   and congruence_class(p, 10, pm(1)) and _l2_prime_depth(p) == 4)
        value = ValueOrRange.exact(6) if deepest else ValueOrRange.between(3, 5)
        rules.append(_Rule(value, DepthProvenance.L2P2_RULE, ANCHOR_L2P2))
        if p in (5, 7, 11, 13):
            import length
            rules.append(_upper(length.length_L2(q).value.value - 3, DepthProvenance.PAPER_PRINTED,
                                ANCHOR_L2P2_SMALL))
    return rules


def _alternating_rules(n: int) -> list[_Rule]:
    if n < 23:
        return [_upper(6 if n == 16 else 5, DepthProvenance.PAPER_PRINTED, ANCHOR_ALTERNATING)]
    return [_upper(23, DepthProvenance.PAPER_PRINTED, ANCHOR_ALTERNATING)]


def _linear_rules(g: GroupId, p: int, f: int) -> list[_Rule]:
    n, q = g.params
    of = omega(f)
    sub, cap = DepthProvenance.SUBFIELD_UPPER, DepthProvenance.MAXIMAL_UPPER
    rules: list[_Rule] = []
    if g.sign is Sign.PLUS:
        r = n - 1
        if n == 3 and p % 2 == 1:
            if f == 1:
                rules.append(_upper(6, cap, ANCHOR_L3_ODD))
            elif f == 2:
                rules.append(_upper(8, cap, ANCHOR_L3_ODD))
            rules.append(_upper(2 * of + 6, sub, ANCHOR_L3_ODD))
        if n == 3 and p == 2 and f in (2, 3):
            rules.append(_upper(4, cap, ANCHOR_CLASSICAL))
        if n == 4 and p >= 5 and f == 1:
            rules.append(_upper(9, cap, ANCHOR_CLASSICAL))
        if 2 <= r <= 8:
            if r % 2 == 1:
                rules.append(_upper(2 * of + 15, sub, ANCHOR_CLASSICAL))
            elif p == 2:
                rules.append(_upper(2 * of + 7, sub, ANCHOR_CLASSICAL))
            else:
                rules.append(_upper(2 * of + 12, sub, ANCHOR_CLASSICAL))
        return rules
    r = n // 2
    if n % 2 == 1:
        if p % 2 == 1:
            if n == 3:
                if f == 1:
                    rules.append(_upper(6, cap, ANCHOR_U3_ODD))
                elif f in (2, 3, 5):
                    rules.append(_upper(8, cap, ANCHOR_U3_FIELD))
                elif f == 4:
                    rules.append(_upper(10, cap, ANCHOR_U3_FIELD))
            if r <= 4:
                rules.append(_upper(2 * of + 12, sub, ANCHOR_CLASSICAL))
        elif f % 2 == 1 and r <= 4:
            rules.append(_upper(2 * of + 6, sub, ANCHOR_CLASSICAL))
        if (n, q) == (7, 4):
            rules.append(_upper(4, cap, ANCHOR_U74))
        rules.append(_upper(3 * of + 2 * f + 35, sub, ANCHOR_CLASSICAL))
        return rules
    if 2 <= r <= 4:
        rules.append(_upper(of + 12 if p == 2 else 2 * of + 15, sub, ANCHOR_CLASSICAL))
    if n == 4 and p % 2 == 1 and f <= 2:
        rules.append(_upper(9, cap, ANCHOR_CLASSICAL))
    return rules


def _lie_rules(g: GroupId) -> list[_Rule]:
    p, f = catalog.lie_parameters(g)
    q = g.q
    of = omega(f)
    sub, cap = DepthProvenance.SUBFIELD_UPPER, DepthProvenance.MAXIMAL_UPPER
    fam = g.family
    if fam is Family.LINEAR:
        return _linear_rules(g, p, f)
    if fam is Family.SUZUKI:
        return [_upper(omega(q - 1) + 2, cap, ANCHOR_SZ)]
    if fam is Family.REE:
        return [_upper(omega(q - 1) + 3, cap, ANCHOR_REE), _upper(of + 4, sub, ANCHOR_REE)]
    if fam is Family.G2:
        return [_upper(of + 6, sub, ANCHOR_G2)]
    if fam is Family.TRIALITY:
        return [_upper(of + 7, sub, ANCHOR_3D4)]
    if fam is Family.TWISTED_F4:
        return [_upper(of + 5, sub, ANCHOR_2F4)]
    if fam in (Family.E6, Family.E7, Family.E8):
        rules = [_upper(3 * of + 36, sub, ANCHOR_EXCEPTIONAL)]
        if fam is Family.E6 and f == 1:
            rules.append(_upper(10, cap, ANCHOR_EXCEPTIONAL))
        return rules
    if fam is Family.SYMPLECTIC:
        r = g.params[0] // 2
        rules = []
        if p == 2:
            if r <= 6:
                rules.append(_upper(of + 10, sub, ANCHOR_CLASSICAL))
            if (r == 2 and f in (2, 3)) or (r, f) == (3, 1):
                rules.append(_upper(5, cap, ANCHOR_CLASSICAL))
            return rules
        if r <= 6:
            rules.append(_upper(2 * of + 13, sub, ANCHOR_CLASSICAL))
        if (r, f) in ((3, 1), (2, 1)):
            rules.append(_upper(7, cap, ANCHOR_CLASSICAL))
        if r == 2 and f in (2, 3):
            rules.append(_upper(8, cap, ANCHOR_CLASSICAL))
        if r == 2 and f == 4:
            rules.append(_upper(11, cap, ANCHOR_CLASSICAL))
        return rules
    if fam is Family.ORTHOGONAL:
        dim = g.params[0]
        if g.sign is Sign.ZERO and 3 <= (dim - 1) // 2 <= 6:
            return [_upper(2 * of + 10, sub, ANCHOR_CLASSICAL)]
        if g.sign is Sign.PLUS and 4 <= dim // 2 <= 6:
            return [_upper(of + 9 if p == 2 else 3 * of + 9, sub, ANCHOR_CLASSICAL)]
    return []


def _simple_depth(g: GroupId) -> DepthResult:
    rules: list[_Rule] = []
    if depth3_simple(g):
        rules.append(_Rule(ValueOrRange.exact(3), DepthProvenance.TABLE1, ANCHOR_TABLE1))
    else:
        rules.append(_Rule(ValueOrRange.between(4, None), DepthProvenance.TABLE1, ANCHOR_NOT_TABLE1))
    if table4_membership(g):
        rules.append(_Rule(ValueOrRange.exact(4), DepthProvenance.TABLE4, ANCHOR_TABLE4))
    printed = _printed_rule(g)
    if printed is not None:
        rules.append(printed)
    if g.family is Family.ALTERNATING:
        rules.extend(_alternating_rules(g.n))
    elif _is_l2(g):
        rules.extend(_l2_rules(g.q))
    elif catalog.is_lie_type(g):
        rules.extend(_lie_rules(g))
    return _settle(g, rules)


def _soluble_depth(g: GroupId) -> DepthResult:
    rules = [_Rule(chief_length(g), DepthProvenance.KOHLER_CHIEF, ANCHOR_KOHLER)]
    if g.family is Family.WREATH:
        inner = depth_of(g.parts[0]).value
        rules.append(_Rule(ValueOrRange.between(inner.low + 2, None), DepthProvenance.SW_LOWER,
                           ANCHOR_WREATH))
    return _settle(g, rules)


def _almost_simple_rules(t: GroupId, p: int, unique: bool) -> list[_Rule]:
    t = catalog.normalize(t)
    if catalog.outer_order(t) % p:
        raise GroupIdValidityError(f"{catalog.render(t)} has no outer automorphism of order {p}")
    inner = depth_of(t).value
    high = None if inner.high is None else inner.high + 1
    if table3_membership(t, p):
        if unique:
            return [_Rule(ValueOrRange.exact(4), DepthProvenance.TABLE3, ANCHOR_TABLE3)]
        return [_Rule(ValueOrRange.between(4, high), DepthProvenance.EXTENSION_BOUND, ANCHOR_ALMOST_SIMPLE)]
    if inner.is_exact and inner.value == 3:
        return [_Rule(ValueOrRange.exact(4), DepthProvenance.EXTENSION_BOUND, ANCHOR_ALMOST_SIMPLE)]
    low = 5 if inner.low >= 4 else 4
    return [_Rule(ValueOrRange.between(low, high), DepthProvenance.EXTENSION_BOUND, ANCHOR_ALMOST_SIMPLE)]


def _product_rules(g: GroupId) -> list[_Rule]:
    soluble = [x for x in g.parts if catalog.is_soluble(x)]
    insoluble = [x for x in g.parts if not catalog.is_soluble(x)]
    top = insoluble[0] if len(insoluble) == 1 else catalog.product(*insoluble)
    if soluble:
        rest = soluble[0] if len(soluble) == 1 else catalog.product(*soluble)
        top_depth = depth_of(top).value
        if catalog.supersoluble_soluble(rest) is True:
            # a supersoluble factor peels off one prime-order normal subgroup at a time
            shifted = top_depth + omega(catalog.order(rest))
            return [_Rule(shifted, DepthProvenance.PRIME_FACTOR, ANCHOR_PRIME_FACTOR)]
        rest_depth = depth_of(rest).value
        high = None if top_depth.high is None or rest_depth.high is None else top_depth.high + rest_depth.high
        return [_Rule(ValueOrRange.between(max(top_depth.low, rest_depth.low), high),
                      DepthProvenance.DIRECT_PRODUCT, ANCHOR_SECTION)]
    if len(insoluble) == 2 and insoluble[0] == insoluble[1] and catalog.is_nonabelian_simple(insoluble[0]):
        inner = depth_of(insoluble[0]).value
        if inner.is_exact and inner.value == 3:
            return [_Rule(ValueOrRange.exact(4), DepthProvenance.DIRECT_PRODUCT, ANCHOR_TT)]
        high = None if inner.high is None else inner.high + 1
        return [_Rule(ValueOrRange.between(5, high), DepthProvenance.DIRECT_PRODUCT, ANCHOR_TT)]
    depths = [depth_of(x).value for x in insoluble]
    highs = [d.high for d in depths]
    high = None if None in highs else sum(highs)
    low = max([5] + [d.low for d in depths])
    return [_Rule(ValueOrRange.between(low, high), DepthProvenance.DIRECT_PRODUCT, ANCHOR_PRODUCT_DEPTH4)]


def _composite_depth(g: GroupId) -> DepthResult:
    chief = chief_length(g)
    rules = [_Rule(ValueOrRange.between(max(4, chief.low + 2), None), DepthProvenance.SW_LOWER,
                   ANCHOR_NONSIMPLE)]
    fam = g.family
    if fam is Family.PRODUCT:
        rules.extend(_product_rules(g))
    elif fam is Family.CENTRAL:
        rules.append(_Rule(depth_of(g.parts[0]).value + 1, DepthProvenance.PRIME_FACTOR,
                           ANCHOR_PRIME_FACTOR))
    elif fam is Family.SPECIAL_LINEAR:
        n, q = g.params
        base = catalog.normalize(GroupId(Family.LINEAR, (n, q), g.sign))
        centre = math.gcd(n, q - g.sign.value_int)
        rules.append(_Rule(depth_of(base).value + omega(centre), DepthProvenance.PRIME_FACTOR,
                           ANCHOR_PRIME_FACTOR))
    elif fam is Family.SYMMETRIC:
        rules.extend(_almost_simple_rules(catalog.alternating(g.n), 2, unique=True))
    elif fam is Family.PROJECTIVE_GENERAL:
        n, q = g.params
        base = catalog.normalize(GroupId(Family.LINEAR, (n, q), g.sign))
        d = math.gcd(n, q - g.sign.value_int)
        if is_prime(d):
            rules.extend(_almost_simple_rules(base, d, unique=True))
        else:
            inner = depth_of(base).value
            high = None if inner.high is None else inner.high + omega(d)
            rules.append(_Rule(ValueOrRange.between(5, high), DepthProvenance.EXTENSION_BOUND,
                               ANCHOR_ALMOST_SIMPLE))
    elif fam is Family.EXTENSION:
        base, p = g.parts[0], g.params[0]
        if catalog.is_nonabelian_simple(base):
            unique = (catalog.render(base), p) not in AMBIGUOUS_EXTENSIONS
            rules.extend(_almost_simple_rules(base, p, unique))
        else:
            inner = depth_of(base).value
            high = None if inner.high is None else inner.high + 1
            rules.append(_Rule(ValueOrRange.between(4, high), DepthProvenance.EXTENSION_BOUND,
                               ANCHOR_SECTION))
    elif fam is Family.WREATH:
        inner = depth_of(g.parts[0]).value
        high = None if inner.high is None else g.params[0] * inner.high + 1
        rules.append(_Rule(ValueOrRange.between(4, high), DepthProvenance.EXTENSION_BOUND, ANCHOR_SECTION))
    else:
        raise NotCoveredError(f"No depth rule for {catalog.render(g)}")
    return _settle(g, rules)


def depth_of(g: GroupId) -> DepthResult:
    canon = catalog.normalize(g)
    try:
        if catalog.is_soluble(canon):
            return _soluble_depth(canon)
        if catalog.is_nonabelian_simple(canon):
            return _simple_depth(canon)
        return _composite_depth(canon)
    except UnsupportedFamilyError as e:
        raise NotCoveredError(f"No depth rule for {catalog.render(canon)}: {e}") from e


def depth_witnesses(g: GroupId) -> dict[str, str]:
    """Factorizations and congruences behind the depth rules for g, for --why output."""
    canon = catalog.normalize(g)
    witnesses = {"group": catalog.render(canon)}
    fam = canon.family
    if _is_l2(canon):
        q = canon.q
        p, f = prime_power(q)
        witnesses["q-1"] = str(factorize(q - 1))
        witnesses["q+1"] = str(factorize(q + 1))
        witnesses["Omega(q-1)"] = str(omega(q - 1))
        witnesses["Omega(q+1)"] = str(omega(q + 1))
        witnesses["q mod 40"] = str(q % 40)
        if f > 1:
            witnesses["p"] = str(p)
            witnesses["p-1"] = str(factorize(p - 1)) if p > 2 else "1"
            witnesses["p+1"] = str(factorize(p + 1))
            witnesses["p mod 40"] = str(p % 40)
    elif fam is Family.ALTERNATING and canon.n % 2 == 1:
        n = canon.n
        witnesses["n-1"] = str(factorize(n - 1))
        witnesses["(n-1)/2"] = str(factorize((n - 1) // 2))
    elif fam is Family.LINEAR and is_prime(canon.n) and canon.n >= 3:
        quotient = linear_quotient(canon.n, canon.q, canon.sign)
        witnesses["quotient"] = f"{quotient} = {factorize(quotient)}"
    elif fam is Family.SUZUKI:
        q = canon.q
        s = math.isqrt(2 * q)
        witnesses["q-1"] = str(factorize(q - 1))
        witnesses["q+sqrt(2q)+1"] = str(factorize(q + s + 1))
        witnesses["q-sqrt(2q)+1"] = str(factorize(q - s + 1))
    elif fam is Family.REE:
        q = canon.q
        s = math.isqrt(3 * q)
        witnesses["q+sqrt(3q)+1"] = str(factorize(q + s + 1))
        witnesses["q-sqrt(3q)+1"] = str(factorize(q - s + 1))
    elif fam is Family.TRIALITY:
        q = canon.q
        witnesses["q^4-q^2+1"] = str(factorize(q ** 4 - q ** 2 + 1))
    else:
        witnesses["order"] = str(catalog.order(canon))
    return witnesses
