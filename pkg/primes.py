"""
Prime-family searches.

A PrimeCondition is a small closed expression tree over a prime p: big-omega
comparisons on integer polynomials in p (optionally divided by a constant),
primality of such values, congruence clauses and membership in explicit
sets. Polynomials are split into irreducible factors once with sympy, and
Omega is summed over the factors cheapest first, stopping as soon as the
comparison is decided. Linear factors p+c read Omega off a segmented sieve
window instead of being factored.

search() walks [2, limit] in fixed blocks. Blocks are independent, so they can
be fanned out over a multiprocessing pool; Pool.imap keeps block order, so
the merged output is the same for every block size and job count.
"""

import logging
import math
import multiprocessing
from dataclasses import dataclass
from typing import Iterator

import numpy as np
import sympy
from sympy import factor_list, sympify

from arithmetic import (MOD40_DEPTH3, factorize, format_factorization, is_prime, omega,
                        omega_range, pm, prime_range, simple_sieve)
from errors import ArithmeticDomainError
from model import AppendixRecord, PrimeRecord

logger = logging.getLogger(__name__)

P = sympy.Symbol("p")
DEFAULT_BLOCK_SIZE = 1 << 16


# --- Polynomial terms ---

def _horner(coeffs: tuple[int, ...], p: int) -> int:
    value = 0
    for c in coeffs:
        value = value * p + c
    return value


class OmegaWindow:
    """Big-omega of every integer in [start, start+len(counts)) from one sieve pass."""

    def __init__(self, start: int, counts: np.ndarray):
        self.start = start
        self.counts = counts

    @classmethod
    def around(cls, lo: int, hi: int, base: np.ndarray | None = None) -> "OmegaWindow":
        start = max(1, lo - 1)
        return cls(start, omega_range(start, hi + 1, base))

    def get(self, n: int) -> int | None:
        i = n - self.start
        if 0 <= i < len(self.counts):
            return int(self.counts[i])
        return None


@dataclass(frozen=True)
class PolyTerm:
    """An integer polynomial in p divided by a constant, stored as its irreducible factors."""
    label: str
    content: int
    factors: tuple[tuple[tuple[int, ...], int], ...]   # (coefficients high to low, exponent)
    divisor: int = 1

    @classmethod
    def of(cls, expr: str, divisor: int = 1, label: str | None = None) -> "PolyTerm":
        parsed = sympify(expr, locals={"p": P})
        content, pieces = factor_list(parsed, P)
        factors = []
        for piece, exp in pieces:
            coeffs = tuple(int(c) for c in sympy.Poly(piece, P).all_coeffs())
            factors.append((coeffs, int(exp)))
        # cheapest first: low degree, then small coefficients
        factors.sort(key=lambda f: (len(f[0]), [abs(c) for c in f[0]]))
        if label is None:
            label = expr if divisor == 1 else f"({expr})/{divisor}"
        return cls(label, int(content), tuple(factors), divisor)

    @property
    def degree(self) -> int:
        return sum((len(c) - 1) * e for c, e in self.factors)

    def numerator(self, p: int) -> int:
        value = self.content
        for coeffs, exp in self.factors:
            value *= _horner(coeffs, p) ** exp
        return value

    def divides(self, p: int) -> bool:
        return self.numerator(p) % self.divisor == 0

    def value(self, p: int) -> int:
        num = self.numerator(p)
        if num % self.divisor:
            raise ArithmeticDomainError(f"{self.label} is not an integer at p = {p}")
        return num // self.divisor

    def omega(self, p: int, window: OmegaWindow | None = None, stop_at: int | None = None) -> int:
        """Omega of the value at p.

        With stop_at, returns early once the running total reaches stop_at; a
        result below stop_at is always exact.
        """
        if self.divisor != 1 and not self.divides(p):
            raise ArithmeticDomainError(f"{self.label} is not an integer at p = {p}")
        total = (omega(abs(self.content)) if self.content not in (1, -1) else 0) - omega(self.divisor)
        for coeffs, exp in self.factors:
            v = _horner(coeffs, p)
            if v <= 0:
                raise ArithmeticDomainError(f"factor of {self.label} is {v} at p = {p}")
            known = window.get(v) if window is not None and len(coeffs) == 2 else None
            total += exp * (known if known is not None else omega(v))
            if stop_at is not None and total >= stop_at:
                return total
        return total

    def witness(self, p: int) -> str:
        return format_factorization(factorize(self.value(p)))


# --- Clauses ---

class Clause:
    """Boolean node of a prime condition."""

    def holds(self, p: int, window: OmegaWindow | None = None) -> bool:
        raise NotImplementedError

    def terms(self) -> list[PolyTerm]:
        return []

    def __and__(self, other: "Clause") -> "Clause":
        return AllOf((self, other))

    def __or__(self, other: "Clause") -> "Clause":
        return AnyOf((self, other))

    def __invert__(self) -> "Clause":
        return Negation(self)


_COMPARE = {
    "==": lambda v, b: v == b,
    "<=": lambda v, b: v <= b,
    ">=": lambda v, b: v >= b,
    "<": lambda v, b: v < b,
    ">": lambda v, b: v > b,
}


def _stop_for(op: str, bound: int) -> int:
    return bound if op in (">=", "<") else bound + 1


@dataclass(frozen=True)
class OmegaCompare(Clause):
    term: PolyTerm
    op: str
    bound: int

    def holds(self, p, window=None):
        return _COMPARE[self.op](self.term.omega(p, window, _stop_for(self.op, self.bound)), self.bound)

    def terms(self):
        return [self.term]

    def __str__(self):
        return f"Omega({self.term.label}) {self.op} {self.bound}"


@dataclass(frozen=True)
class OmegaExtreme(Clause):
    """min or max of Omega over several terms, compared with a bound."""
    kind: str          # "min" | "max"
    members: tuple[PolyTerm, ...]
    op: str
    bound: int

    def holds(self, p, window=None):
        values = [t.omega(p, window) for t in self.members]
        pick = min(values) if self.kind == "min" else max(values)
        return _COMPARE[self.op](pick, self.bound)

    def terms(self):
        return list(self.members)

    def __str__(self):
        names = ", ".join(t.label for t in self.members)
        return f"{self.kind} Omega({names}) {self.op} {self.bound}"


@dataclass(frozen=True)
class IsPrimeValue(Clause):
    term: PolyTerm

    def holds(self, p, window=None):
        return self.term.divides(p) and is_prime(self.term.value(p))

    def terms(self):
        return [self.term]

    def __str__(self):
        return f"{self.term.label} prime"


@dataclass(frozen=True)
class Divides(Clause):
    term: PolyTerm

    def holds(self, p, window=None):
        return self.term.divides(p)

    def __str__(self):
        return f"{self.term.divisor} | {self.term.label}"


@dataclass(frozen=True)
class Congruent(Clause):
    modulus: int
    residues: frozenset[int]

    def holds(self, p, window=None):
        return p % self.modulus in {r % self.modulus for r in self.residues}

    def __str__(self):
        return f"p mod {self.modulus} in {sorted(r % self.modulus for r in self.residues)}"


@dataclass(frozen=True)
class InSet(Clause):
    values: frozenset[int]

    def holds(self, p, window=None):
        return p in self.values

    def __str__(self):
        return f"p in {sorted(self.values)}"


@dataclass(frozen=True)
class AtLeast(Clause):
    bound: int

    def holds(self, p, window=None):
        return p >= self.bound

    def __str__(self):
        return f"p >= {self.bound}"


@dataclass(frozen=True)
class AllOf(Clause):
    children: tuple[Clause, ...]

    def holds(self, p, window=None):
        return all(c.holds(p, window) for c in self.children)

    def terms(self):
        return [t for c in self.children for t in c.terms()]

    def __and__(self, other):
        return AllOf(self.children + (other,))

    def __str__(self):
        return " and ".join(f"({c})" for c in self.children)


@dataclass(frozen=True)
class AnyOf(Clause):
    children: tuple[Clause, ...]

    def holds(self, p, window=None):
        return any(c.holds(p, window) for c in self.children)

    def terms(self):
        return [t for c in self.children for t in c.terms()]

    def __or__(self, other):
        return AnyOf(self.children + (other,))

    def __str__(self):
        return " or ".join(f"({c})" for c in self.children)


@dataclass(frozen=True)
class Negation(Clause):
    child: Clause

    def holds(self, p, window=None):
        return not self.child.holds(p, window)

    def terms(self):
        return self.child.terms()

    def __str__(self):
        return f"not ({self.child})"


@dataclass(frozen=True)
class PrimeCondition:
    name: str
    root: Clause
    anchor: str = ""

    def holds(self, p: int, window: OmegaWindow | None = None) -> bool:
        return self.root.holds(p, window)

    def witnesses(self, p: int) -> dict[str, str]:
        out: dict[str, str] = {"p mod 40": str(p % 40)}
        for term in self.root.terms():
            if term.label not in out and term.divides(p):
                out[term.label] = term.witness(p)
        return out

    def __str__(self) -> str:
        return str(self.root)


# --- Named conditions ---

def omega_of(expr: str, op: str, bound: int, divisor: int = 1) -> OmegaCompare:
    return OmegaCompare(PolyTerm.of(expr, divisor), op, bound)


P_MINUS, P_PLUS = PolyTerm.of("p-1"), PolyTerm.of("p+1")


def max_omega_pm(op: str, bound: int) -> OmegaExtreme:
    return OmegaExtreme("max", (P_MINUS, P_PLUS), op, bound)


def min_omega_pm(op: str, bound: int) -> OmegaExtreme:
    return OmegaExtreme("min", (P_MINUS, P_PLUS), op, bound)


def _power_row(f: int, minus: tuple[str, int], plus: tuple[str, int]) -> Clause:
    return omega_of(f"p**{f}-1", *minus) & omega_of(f"p**{f}+1", *plus)


MOD40 = Congruent(40, MOD40_DEPTH3)

_TABLE5 = "simple groups of length at most 9"

_NAMED = [
    PrimeCondition("table5-row1", max_omega_pm("==", 3) & MOD40 & AtLeast(7),
                   "l(L2(p)) = 4: p > 5, max Omega(p±1) = 3 and p = ±3, ±13 mod 40"),
    PrimeCondition("table5-l5-prime", max_omega_pm("==", 4), f"{_TABLE5}: l(L2(p)) = 5"),
    PrimeCondition("table5-l6-prime", max_omega_pm("==", 5), f"{_TABLE5}: l(L2(p)) = 6"),
    PrimeCondition("table5-l7-prime", max_omega_pm("==", 6), f"{_TABLE5}: l(L2(p)) = 7"),
    PrimeCondition("table5-l7-cube", _power_row(3, ("==", 4), ("<=", 6)), f"{_TABLE5}: l(L2(p^3)) = 7"),
    PrimeCondition("table5-l8-prime", max_omega_pm("==", 7), f"{_TABLE5}: l(L2(p)) = 8"),
    PrimeCondition("table5-l8-square", _power_row(2, ("==", 6), ("<=", 7)), f"{_TABLE5}: l(L2(p^2)) = 8"),
    PrimeCondition("table5-l8-cube-a", _power_row(3, ("==", 5), ("<=", 7)), f"{_TABLE5}: l(L2(p^3)) = 8"),
    PrimeCondition("table5-l8-cube-b", _power_row(3, ("<=", 4), ("==", 7)), f"{_TABLE5}: l(L2(p^3)) = 8"),
    PrimeCondition("table5-l8-fifth", _power_row(5, ("==", 3), ("<=", 7)), f"{_TABLE5}: l(L2(p^5)) = 8"),
    PrimeCondition("table5-l9-prime", max_omega_pm("==", 8), f"{_TABLE5}: l(L2(p)) = 9"),
    PrimeCondition("table5-l9-square-a", _power_row(2, ("==", 7), ("<=", 8)), f"{_TABLE5}: l(L2(p^2)) = 9"),
    PrimeCondition("table5-l9-square-b", _power_row(2, ("==", 6), ("==", 8)), f"{_TABLE5}: l(L2(p^2)) = 9"),
    PrimeCondition("table5-l9-cube-a", _power_row(3, ("==", 6), ("<=", 8)), f"{_TABLE5}: l(L2(p^3)) = 9"),
    PrimeCondition("table5-l9-cube-b", _power_row(3, ("<=", 5), ("==", 8)), f"{_TABLE5}: l(L2(p^3)) = 9"),
    PrimeCondition("table5-l9-fifth-a", _power_row(5, ("==", 4), ("<=", 8)), f"{_TABLE5}: l(L2(p^5)) = 9"),
    PrimeCondition("table5-l9-fifth-b", _power_row(5, ("==", 3), ("==", 8)), f"{_TABLE5}: l(L2(p^5)) = 9"),
    PrimeCondition("cd2-min2", omega_of("p-1", "==", 2) & omega_of("p+1", "==", 4),
                   "L2(p) with Omega(p-1) = 2 and Omega(p+1) = 4 has cd = 2"),
    PrimeCondition("fifth-power-l8", _power_row(5, ("==", 3), ("<=", 7)),
                   "Omega(p^5-1) = 3 and Omega(p^5+1) <= 7"),
    PrimeCondition("cube-l7", _power_row(3, ("==", 4), ("<=", 6)),
                   "Omega(p^3-1) = 4 and Omega(p^3+1) <= 6"),
    PrimeCondition("cube-depth5",
                   _power_row(3, ("==", 4), ("<=", 6)) & min_omega_pm(">=", 3),
                   "l(L2(p^3)) = 7 with Omega(p±1) >= 3, smallest member 433373"),
    PrimeCondition("u3-l9",
                   omega_of("p-1", "==", 3) & omega_of("p+1", "==", 3) & Congruent(3, frozenset({2}))
                   & MOD40 & omega_of("p**2-p+1", "<=", 8),
                   "U3(p) has length 9: Omega(p±1) = 3, Omega(p^2-p+1) <= 8, p = 2 mod 3, p = ±3, ±13 mod 40"),
    PrimeCondition("appendix",
                   Congruent(72, frozenset({5})) & Divides(PolyTerm.of("p**2-1", 24))
                   & omega_of("p**2-1", "<=", 7, divisor=24),
                   "primes p = 5 mod 72 with Omega((p^2-1)/24) <= 7"),
    PrimeCondition("cd1-i",
                   min_omega_pm(">=", 3) & max_omega_pm("<=", 4)
                   & (Congruent(10, pm(1)) | Congruent(8, pm(1))),
                   "cd(L2(p)) = 1: 3 <= Omega(p±1) <= 4 and p = ±1 mod 10 or ±1 mod 8"),
    PrimeCondition("cd1-ii", max_omega_pm("<=", 3) & MOD40,
                   "cd(L2(p)) = 1: Omega(p±1) <= 3 and p = ±3, ±13 mod 40"),
    PrimeCondition("cd2-a", max_omega_pm("==", 4) & (min_omega_pm("==", 2) | MOD40),
                   "cd(L2(p)) = 2: max Omega(p±1) = 4 and (min = 2 or p = ±3, ±13 mod 40)"),
    PrimeCondition("cd2-b", max_omega_pm("==", 5) & min_omega_pm(">=", 3) & ~MOD40,
                   "cd(L2(p)) = 2: max Omega(p±1) = 5, min >= 3, p != ±3, ±13 mod 40"),
    PrimeCondition("cr-equality", max_omega_pm("==", 4) & min_omega_pm(">=", 3) & ~MOD40,
                   "cr(L2(p)) = 5/4: max Omega(p±1) = 4, min >= 3, p != ±3, ±13 mod 40"),
    PrimeCondition("depth3-alternating",
                   Divides(PolyTerm.of("p-1", 2)) & IsPrimeValue(PolyTerm.of("p-1", 2))
                   & ~InSet(frozenset({7, 11, 23})),
                   "A_p has depth 3 iff (p-1)/2 is prime and p not in {7, 11, 23}"),
]

CONDITIONS: dict[str, PrimeCondition] = {c.name: c for c in _NAMED}


def get_condition(name: str) -> PrimeCondition:
    try:
        return CONDITIONS[name]
    except KeyError:
        raise ValueError(f"Unknown prime condition '{name}'. Known: {', '.join(CONDITIONS)}") from None


# --- Search ---

def blocks(limit: int, block_size: int = DEFAULT_BLOCK_SIZE) -> list[tuple[int, int]]:
    """Partition [2, limit] into consecutive closed blocks."""
    if block_size < 1:
        raise ValueError(f"block_size must be positive, got {block_size}")
    return [(lo, min(lo + block_size - 1, limit)) for lo in range(2, limit + 1, block_size)]


def _needs_window(cond: PrimeCondition) -> bool:
    return any(len(c) == 2 for t in cond.root.terms() for c, _ in t.factors)


def search_block(cond: PrimeCondition, lo: int, hi: int, base: np.ndarray | None = None) -> list[int]:
    """All primes in [lo, hi] satisfying cond, ascending."""
    candidates = prime_range(lo, hi, base)
    if candidates.size == 0:
        return []
    window = OmegaWindow.around(lo, hi, base) if _needs_window(cond) else None
    return [int(p) for p in candidates if cond.holds(int(p), window)]


# Top-level so Pool can pickle it.
def _search_block_worker(args: tuple[PrimeCondition, int, int]) -> tuple[int, list[int]]:
    cond, lo, hi = args
    return lo, search_block(cond, lo, hi)


def iter_search(cond: PrimeCondition, limit: int, jobs: int = 1,
                block_size: int = DEFAULT_BLOCK_SIZE) -> Iterator[tuple[int, list[int]]]:
    """Yield (block start, hits) per block in ascending block order."""
    if limit < 2:
        raise ArithmeticDomainError(f"search needs limit >= 2, got {limit}")
    tasks = [(cond, lo, hi) for lo, hi in blocks(limit, block_size)]
    logger.info("[PrimeSearch] %s up to %d in %d blocks, %d job(s)", cond.name, limit, len(tasks), jobs)
    if jobs <= 1 or len(tasks) == 1:
        base = simple_sieve(math.isqrt(limit + 1) + 1)
        for _, lo, hi in tasks:
            yield lo, search_block(cond, lo, hi, base)
        return
    chunksize = max(1, len(tasks) // (jobs * 4))
    with multiprocessing.Pool(processes=jobs) as pool:
        yield from pool.imap(_search_block_worker, tasks, chunksize=chunksize)


def search(cond: PrimeCondition | str, limit: int, jobs: int = 1,
           block_size: int = DEFAULT_BLOCK_SIZE) -> list[int]:
    if isinstance(cond, str):
        cond = get_condition(cond)
    found: list[int] = []
    for _, hits in iter_search(cond, limit, jobs, block_size):
        found.extend(hits)
    return found


def search_records(cond: PrimeCondition | str, limit: int, jobs: int = 1,
                   block_size: int = DEFAULT_BLOCK_SIZE) -> list[PrimeRecord]:
    if isinstance(cond, str):
        cond = get_condition(cond)
    return [PrimeRecord(p, cond.name, cond.witnesses(p)) for p in search(cond, limit, jobs, block_size)]


def appendix_record(p: int) -> AppendixRecord:
    """Witnesses for one appendix prime.

    For p = 5 mod 72, (p-1)/4 and (p+1)/6 are coprime to 6 and to each other, so
    their Omegas add up to Omega((p^2-1)/24).
    """
    quotient = (p * p - 1) // 24
    om, op = omega(p - 1), omega(p + 1)
    minus_part = omega((p - 1) // 4) if (p - 1) % 4 == 0 else 0
    plus_part = omega((p + 1) // 6) if (p + 1) % 6 == 0 else 0
    omega_quotient = omega(quotient)
    return AppendixRecord(
        p=p,
        quotient=format_factorization(factorize(quotient)),
        omega_quotient=omega_quotient,
        omega_minus=om,
        omega_plus=op,
        gcd_minus=math.gcd(p - 1, 72),
        gcd_plus=math.gcd(p + 1, 72),
        omega_minus_part=minus_part,
        omega_plus_part=plus_part,
        divisible_by_24=(p * p - 1) % 24 == 0,
        max_omega_ok=max(om, op) <= 8,
        split_ok=(p == 5 or minus_part >= 1) and minus_part + plus_part == omega_quotient,
    )


def appendix_family(limit: int, jobs: int = 1, block_size: int = DEFAULT_BLOCK_SIZE) -> list[AppendixRecord]:
    if limit < 5:
        raise ArithmeticDomainError(f"appendix_family needs limit >= 5, got {limit}")
    return [appendix_record(p) for p in search(CONDITIONS["appendix"], limit, jobs, block_size)]


def u3_length9_family(limit: int, jobs: int = 1, block_size: int = DEFAULT_BLOCK_SIZE) -> list[int]:
    """Primes q with U3(q) of length 9 through the prime-q clause (the explicit q = 29 is not a member)."""
    return search(CONDITIONS["u3-l9"], limit, jobs, block_size)
