# --- START OF FILE chainforge/chains.py ---

"""
Chain difference cd = l - depth and chain ratio cr = l / depth.

The classification predicates are written from their theorem conditions and
never by subtracting engine values; report() then checks the two routes
against each other whenever l and depth are both exact.
"""

import logging
import math
from collections import Counter
from fractions import Fraction

import catalog
import depth
import length
from arithmetic import congruence_class, is_prime, mod40_clause, omega, pm
from catalog import GroupId
from enums import CheckStatus, Family, Sign
from errors import (ChainforgeError, InternalInconsistencyError, NotCoveredError, NotSimpleError,
                    UnsupportedFamilyError)
from model import ChainReport, CheckResult, OracleReport, ValueOrRange

logger = logging.getLogger(__name__)

ANCHOR_CD1 = ("cd(G) = 1 iff G = L2(q) with q in {4,5,9}, or q prime with 3 <= Omega(q±1) <= 4 and "
              "q = ±1 mod 10 or ±1 mod 8, or Omega(q±1) <= 3 and q = ±3, ±13 mod 40")
ANCHOR_CD2 = ("cd(G) = 2 iff G = A7, J1, U3(5), or L2(q) with q in {7,8,11,27,125}, or q prime with "
              "max Omega(q±1) = 4 and (min = 2 or q = ±3, ±13 mod 40), or max = 5, min >= 3 "
              "and q != ±3, ±13 mod 40")
ANCHOR_CR = "cr(G) >= 5/4 for simple G, with equality iff l(G) = 5 and depth(G) = 4"
ANCHOR_CR_EQUALITY = ("cr = 5/4 exactly for L2(q), q in {9,19,29}, or q prime with max Omega(q±1) = 4, "
                      "min >= 3 and q != ±3, ±13 mod 40")
ANCHOR_IWASAWA = "cd(G) = 0 iff G is supersoluble"

CR_SIMPLE_MIN = Fraction(5, 4)
CR_TRIVIAL_RADICAL_MIN = Fraction(10, 9)

CD2_NAMED = frozenset({"A(7)", "J1", "U(3,5)"})
CD2_L2_EXPLICIT = frozenset({7, 8, 11, 27, 125})
CR_EQUALITY_EXPLICIT = frozenset({9, 19, 29})


def _l2_field(g: GroupId, what: str) -> int | None:
    """q when the simple group g is L2(q), None for other simple groups."""
    canon = catalog.normalize(g)
    if not catalog.is_nonabelian_simple(canon):
        raise NotSimpleError(f"{what} expects a non-abelian simple group, got {catalog.render(g)}")
    if canon.family is Family.LINEAR and canon.sign is Sign.PLUS and canon.n == 2:
        return canon.q
    return None


def _omegas(q: int) -> tuple[int, int]:
    a, b = omega(q - 1), omega(q + 1)
    return min(a, b), max(a, b)


def cd1_simple(g: GroupId) -> bool:
    q = _l2_field(g, "cd1_simple")
    if q is None:
        return False
    if q in (4, 5, 9):
        return True
    if not is_prime(q):
        return False
    low, high = _omegas(q)
    if 3 <= low and high <= 4 and (congruence_class(q, 10, pm(1)) or congruence_class(q, 8, pm(1))):
        return True
    return high <= 3 and mod40_clause(q)


def cd2_simple(g: GroupId) -> bool:
    q = _l2_field(g, "cd2_simple")
    if q is None:
        return catalog.render(catalog.normalize(g)) in CD2_NAMED
    if q in CD2_L2_EXPLICIT:
        return True
    if not is_prime(q):
        return False
    low, high = _omegas(q)
    if high == 4 and (low == 2 or mod40_clause(q)):
        return True
    return high == 5 and low >= 3 and not mod40_clause(q)


def cr5over4_equality(g: GroupId) -> bool:
    q = _l2_field(g, "cr5over4_equality")
    if q is None:
        return False
    if q in CR_EQUALITY_EXPLICIT:
        return True
    if not is_prime(q):
        return False
    low, high = _omegas(q)
    return high == 4 and low >= 3 and not mod40_clause(q)


# --- Interval arithmetic ---

def chain_difference(l: ValueOrRange, d: ValueOrRange) -> ValueOrRange:
    """l - depth endpoint-wise, using depth <= l, clipped at 0."""
    d_high = d.high if l.high is None or (d.high is not None and d.high <= l.high) else l.high
    low = 0 if d_high is None else max(0, l.low - d_high)
    high = None if l.high is None else max(0, l.high - d.low)
    return ValueOrRange.between(low, high)


def chain_ratio(l: ValueOrRange, d: ValueOrRange) -> tuple[Fraction, Fraction | None]:
    """(low, high) bounds on l / depth; cr of the trivial group is taken to be 1."""
    if l.high == 0:
        return Fraction(1), Fraction(1)
    d_high = d.high if l.high is None or (d.high is not None and d.high <= l.high) else l.high
    low = Fraction(1) if d_high is None else max(Fraction(1), Fraction(l.low, d_high))
    high = None if l.high is None or d.low == 0 else Fraction(l.high, d.low)
    return low, high


def _cross_check(name: str, g: GroupId, cd: ValueOrRange, l: ValueOrRange, d: ValueOrRange) -> None:
    if not cd.is_exact:
        return
    routes = (
        ("cd1_simple", cd1_simple(g), cd.value == 1),
        ("cd2_simple", cd2_simple(g), cd.value == 2),
        ("cr5over4_equality", cr5over4_equality(g), l.is_exact and d.is_exact and (l.value, d.value) == (5, 4)),
    )
    for predicate, by_theorem, by_engines in routes:
        if by_theorem != by_engines:
            raise InternalInconsistencyError(
                f"{name}: {predicate} says {by_theorem} but l = {l}, depth = {d} give cd = {cd}")


def report(g: GroupId) -> ChainReport:
    canon = catalog.normalize(g)
    name = catalog.render(canon)
    lres = length.length_of(canon)
    dres = depth.depth_of(canon)
    l, d = lres.value, dres.value
    if d.low > (l.high if l.high is not None else d.low):
        raise InternalInconsistencyError(f"{name}: depth {d} exceeds length {l}")
    cd = chain_difference(l, d)
    soluble = catalog.is_soluble(canon)
    supersoluble = catalog.supersoluble_soluble(canon) if soluble else False
    try:
        if supersoluble is True:
            cd = cd.intersect(ValueOrRange.exact(0))
        elif supersoluble is False:
            cd = cd.intersect(ValueOrRange.between(1, None))
    except InternalInconsistencyError as e:
        raise InternalInconsistencyError(f"{name}: cd = {cd} contradicts supersoluble = {supersoluble}") from e
    if catalog.is_nonabelian_simple(canon):
        _cross_check(name, canon, cd, l, d)
    cr_low, cr_high = chain_ratio(l, d)
    try:
        chief = depth.chief_length(canon)
    except (NotCoveredError, UnsupportedFamilyError):
        chief = None
    provenance = [f"length:{lres.provenance.value}", f"depth:{dres.provenance.value}"]
    provenance.extend(a for a in dict.fromkeys(lres.anchors + dres.anchors))
    if supersoluble is not None and soluble:
        provenance.append(ANCHOR_IWASAWA)
    logger.debug("[ChainReport] %s: l=%s depth=%s cd=%s", name, l, d, cd)
    return ChainReport(group=name, length=l, depth=d, cd=cd, cr_low=cr_low, cr_high=cr_high,
                       chief_length=chief, soluble=soluble, supersoluble=supersoluble,
                       provenance=provenance)


# --- Inequality suite ---

def _scale(v: ValueOrRange, k: int) -> ValueOrRange:
    return ValueOrRange.between(k * v.low, None if v.high is None else k * v.high)


def _at_most(name: str, group: str, lhs: ValueOrRange, rhs: ValueOrRange,
             operands: dict[str, str]) -> CheckResult:
    """Decide lhs <= rhs; exact operands decide directly, intervals only when they do not overlap."""
    operands = {**operands, "lhs": str(lhs), "rhs": str(rhs)}
    if lhs.high is not None and lhs.high <= rhs.low:
        detail = "" if lhs.is_exact and rhs.is_exact else "decided on intervals"
        return CheckResult(name, CheckStatus.PASS, group, detail, operands)
    if rhs.high is not None and lhs.low > rhs.high:
        return CheckResult(name, CheckStatus.FAIL, group, f"{lhs} > {rhs}", operands)
    return CheckResult(name, CheckStatus.SKIP, group, "operands are only known as ranges", operands)


def _skip(name: str, group: str, reason: str) -> CheckResult:
    return CheckResult(name, CheckStatus.SKIP, group, reason)


def _facts(rep: ChainReport, oracle: OracleReport | None) -> tuple[ValueOrRange, ValueOrRange, ValueOrRange]:
    if oracle is None:
        return rep.length, rep.depth, rep.cd
    return (ValueOrRange.exact(oracle.length), ValueOrRange.exact(oracle.depth),
            ValueOrRange.exact(oracle.cd))


def _radical_order(g: GroupId, oracle: OracleReport | None) -> int:
    if oracle is not None:
        return oracle.radical_order
    top = catalog.radical_quotient(g)
    return catalog.order(g) if top is None else catalog.order(g) // catalog.order(top)


def _semisimple_factors(g: GroupId, oracle: OracleReport | None) -> list[GroupId]:
    if oracle is None:
        return catalog.nonabelian_factors(g)
    factors = [catalog.normalize(catalog.parse_group_id(f)) for f in oracle.composition_factors]
    return [t for t in factors if catalog.is_nonabelian_simple(t)]


def _sum_lengths(groups: list[GroupId]) -> ValueOrRange:
    total = ValueOrRange.exact(0)
    for t in groups:
        total = total + length.length_of(t).value
    return total


def _check_length_vs_cd(g, rep, l, cd) -> list[CheckResult]:
    name = "length-vs-cd"
    if not catalog.is_nonabelian_simple(g):
        return [_skip(name, rep.group, "applies to non-abelian simple groups")]
    checks = [_at_most(name, rep.group, l, _scale(cd, 5), {"l": str(l), "cd": str(cd)})]
    if l.is_exact and cd.is_exact:
        equality = l.value == 5 * cd.value
        if equality != cr5over4_equality(g):
            checks.append(CheckResult(name, CheckStatus.FAIL, rep.group,
                                      f"equality l = 5 cd is {equality} but the equality set says otherwise",
                                      {"l": str(l), "cd": str(cd)}))
    return checks


def _check_cr_lower(g, rep, l, d) -> CheckResult:
    name = "cr-lower-bound"
    if not catalog.is_nonabelian_simple(g):
        return _skip(name, rep.group, "applies to non-abelian simple groups")
    low, high = chain_ratio(l, d)
    operands = {"cr_low": str(low), "cr_high": str(high), "bound": str(CR_SIMPLE_MIN)}
    if low >= CR_SIMPLE_MIN:
        return CheckResult(name, CheckStatus.PASS, rep.group, "", operands)
    if high is not None and high < CR_SIMPLE_MIN:
        return CheckResult(name, CheckStatus.FAIL, rep.group, f"cr <= {high} < 5/4", operands)
    return CheckResult(name, CheckStatus.SKIP, rep.group, "cr is only known as a range", operands)


def _check_radical(g, rep, l, d, cd, oracle) -> list[CheckResult]:
    radical = _radical_order(g, oracle)
    top_length = l + (-omega(radical))
    top_length = ValueOrRange.between(max(0, top_length.low), top_length.high)
    top_order = catalog.order(g) // radical if oracle is None else oracle.order // radical
    operands = {"radical_order": str(radical), "l(G/R)": str(top_length), "cd": str(cd)}
    checks = [_at_most("radical-quotient-length", rep.group, top_length, _scale(cd, 10), operands)]
    square = ValueOrRange.between(cd.low ** 2, None if cd.high is None else cd.high ** 2)
    checks.append(_at_most("radical-quotient-omega", rep.group, ValueOrRange.exact(omega(top_order)),
                           _scale(square, 100), {**operands, "Omega(|G/R|)": str(omega(top_order))}))
    if radical != 1:
        checks.append(_skip("trivial-radical-ratio", rep.group, "soluble radical is non-trivial"))
    else:
        low, high = chain_ratio(l, d)
        operands = {"cr_low": str(low), "cr_high": str(high), "bound": str(CR_TRIVIAL_RADICAL_MIN)}
        if low >= CR_TRIVIAL_RADICAL_MIN:
            checks.append(CheckResult("trivial-radical-ratio", CheckStatus.PASS, rep.group, "", operands))
        elif high is not None and high < CR_TRIVIAL_RADICAL_MIN:
            checks.append(CheckResult("trivial-radical-ratio", CheckStatus.FAIL, rep.group,
                                      f"cr <= {high} < 10/9", operands))
        else:
            checks.append(_skip("trivial-radical-ratio", rep.group, "cr is only known as a range"))
    return checks


def _check_semisimple(g, rep, cd, oracle) -> list[CheckResult]:
    factors = _semisimple_factors(g, oracle)
    ss_length = _sum_lengths(factors)
    names = ", ".join(catalog.render(t) for t in factors) or "none"
    checks = [_at_most("semisimple-part-length", rep.group, ss_length, _scale(cd, 5),
                       {"factors": names, "l(ss)": str(ss_length), "cd": str(cd)})]
    factor_cd = ValueOrRange.exact(0)
    for t in factors:
        factor_cd = factor_cd + report(t).cd
    checks.append(_at_most("composition-cd-sum", rep.group, factor_cd, cd,
                           {"factors": names, "sum cd(T_i)": str(factor_cd), "cd": str(cd)}))
    return checks


def _check_automorphism(g, rep, l) -> CheckResult:
    name = "automorphism-length"
    parts = list(g.parts) if g.family is Family.PRODUCT else [g]
    if not all(catalog.is_nonabelian_simple(t) for t in parts):
        return _skip(name, rep.group, "applies to semisimple groups")
    # Aut(T^k) = Aut(T) wr S_k
    aut = ValueOrRange.exact(0)
    for t, k in Counter(catalog.normalize(t) for t in parts).items():
        per_factor = length.length_of(t).value + omega(catalog.outer_order(t))
        aut = aut + _scale(per_factor, k) + omega(math.factorial(k))
    return _at_most(name, rep.group, aut, _scale(l, 2), {"l(Aut)": str(aut), "l": str(l)})


def inequality_suite(reports: list[ChainReport],
                     oracle_facts: dict[str, OracleReport] | None = None) -> list[CheckResult]:
    """Instantiate the structural inequalities for each report.

    Oracle facts, keyed by group name, replace the engine values for l, depth,
    cd, radical and composition factors of that group.
    """
    oracle_facts = oracle_facts or {}
    results: list[CheckResult] = []
    for rep in reports:
        oracle = oracle_facts.get(rep.group)
        try:
            g = catalog.normalize(catalog.parse_group_id(rep.group))
            l, d, cd = _facts(rep, oracle)
            results.extend(_check_length_vs_cd(g, rep, l, cd))
            results.append(_check_cr_lower(g, rep, l, d))
            results.extend(_check_radical(g, rep, l, d, cd, oracle))
            results.extend(_check_semisimple(g, rep, cd, oracle))
            results.append(_check_automorphism(g, rep, l))
        except (NotCoveredError, UnsupportedFamilyError) as e:
            results.append(_skip("suite", rep.group, f"not covered: {e}"))
        except ChainforgeError:
            logger.exception("[InequalitySuite] Checks for %s failed", rep.group)
            raise
    failed = sum(1 for r in results if r.status is CheckStatus.FAIL)
    logger.info("[InequalitySuite] %d checks over %d groups, %d failed", len(results), len(reports), failed)
    return results

# --- END OF FILE chainforge/chains.py ---
