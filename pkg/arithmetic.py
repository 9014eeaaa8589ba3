"""
Exact integer machinery: primality, factorization, big-omega, binary digit
counts, congruence clauses and the numpy sieves behind the prime searches.

All functions are pure. The factorization cache is a memo only; enabling it
through CHAINFORGE_CACHE never changes a result.
"""

import json
import logging
import math
import os
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from sympy import factorint, isprime

from errors import ArithmeticDomainError

logger = logging.getLogger(__name__)

CACHE_ENV_VAR = "CHAINFORGE_CACHE"
CACHE_FILE_NAME = "factorizations.json"
CACHE_MAX_ENTRIES = 250_000
# Values below this bound are never written to disk; sympy factors them instantly.
CACHE_PERSIST_THRESHOLD = 10**12


@dataclass(frozen=True)
class Factorization:
    """Prime factorization of `subject`, primes strictly increasing."""
    subject: int
    factors: tuple[tuple[int, int], ...]

    @property
    def omega(self) -> int:
        return sum(e for _, e in self.factors)

    @property
    def primes(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.factors)

    def recompose(self) -> int:
        value = 1
        for p, e in self.factors:
            value *= p ** e
        return value

    def __str__(self) -> str:
        return format_factorization(self)


class FactorCache:
    """In-process memo for factorize(), optionally backed by a JSON file."""

    def __init__(self, max_entries: int = CACHE_MAX_ENTRIES):
        self._entries: dict[int, tuple[tuple[int, int], ...]] = {}
        self._max_entries = max_entries
        self._path: str | None = None
        self._dirty = False

    @property
    def path(self) -> str | None:
        return self._path

    def get(self, n: int) -> tuple[tuple[int, int], ...] | None:
        return self._entries.get(n)

    def put(self, n: int, factors: tuple[tuple[int, int], ...]) -> None:
        self._entries[n] = factors
        self._trim()
        if n >= CACHE_PERSIST_THRESHOLD:
            self._dirty = True

    def _trim(self) -> None:
        # drop the oldest insertions
        while len(self._entries) > self._max_entries:
            self._entries.pop(next(iter(self._entries)))

    def clear(self) -> None:
        self._entries.clear()
        self._dirty = False

    def __len__(self) -> int:
        return len(self._entries)

    def attach(self, directory: str | None) -> None:
        """Load entries from `directory`/factorizations.json and remember the path for save()."""
        if not directory:
            self._path = None
            return
        self._path = os.path.join(directory, CACHE_FILE_NAME)
        if not os.path.exists(self._path):
            logger.info("[FactorCache] No cache file at %s yet", self._path)
            return
        try:
            with open(self._path, "r", encoding="utf-8") as f:
                raw = json.load(f)
            for key, pairs in raw.items():
                self._entries[int(key)] = tuple((int(p), int(e)) for p, e in pairs)
            self._trim()
            logger.info("[FactorCache] Loaded %d of %d entries from %s", len(self._entries), len(raw), self._path)
        except (OSError, ValueError) as e:
            logger.warning("[FactorCache] Ignoring unreadable cache %s: %s", self._path, e)

    def save(self) -> bool:
        if not self._path or not self._dirty:
            return False
        persisted = {str(n): [[str(p), e] for p, e in fs]
                     for n, fs in self._entries.items() if n >= CACHE_PERSIST_THRESHOLD}
        try:
            os.makedirs(os.path.dirname(self._path), exist_ok=True)
            with open(self._path, "w", encoding="utf-8") as f:
                json.dump(persisted, f)
            self._dirty = False
            logger.info("[FactorCache] Saved %d entries to %s", len(persisted), self._path)
            return True
        except OSError as e:
            logger.warning("[FactorCache] Could not save cache to %s: %s", self._path, e)
            return False


factor_cache = FactorCache()


def configure_cache(directory: str | None = None) -> FactorCache:
    """Attach the shared cache to `directory`, falling back to $CHAINFORGE_CACHE."""
    factor_cache.attach(directory or os.environ.get(CACHE_ENV_VAR) or None)
    return factor_cache


def _require_positive(n: int, what: str) -> None:
    if n < 1:
        raise ArithmeticDomainError(f"{what} is undefined for n = {n}; n must be >= 1")


def is_prime(n: int) -> bool:
    """Exact primality (deterministic Miller-Rabin below 2^64, BPSW above)."""
    if n < 2:
        return False
    return bool(isprime(n))


def factorize(n: int) -> Factorization:
    _require_positive(n, "factorize")
    if n == 1:
        return Factorization(1, ())
    cached = factor_cache.get(n)
    if cached is None:
        cached = tuple(sorted((int(p), int(e)) for p, e in factorint(n).items()))
        factor_cache.put(n, cached)
    return Factorization(n, cached)


def omega(n: int) -> int:
    """Big-omega: prime divisors of n counted with multiplicity."""
    _require_positive(n, "omega")
    if n == 1:
        return 0
    return factorize(n).omega


def binary_ones(n: int) -> int:
    if n < 0:
        raise ArithmeticDomainError(f"binary_ones expects n >= 0, got {n}")
    return bin(n).count("1")


def distinct_prime_factors(n: int) -> frozenset[int]:
    _require_positive(n, "distinct_prime_factors")
    return factorize(n).primes


def pm(*residues: int) -> frozenset[int]:
    """Residue set {r, -r} for each r, as in 'q = ±3, ±13 (mod 40)'."""
    out = set()
    for r in residues:
        out.add(r)
        out.add(-r)
    return frozenset(out)


def congruence_class(n: int, modulus: int, residues: Iterable[int]) -> bool:
    if modulus < 2:
        raise ArithmeticDomainError(f"congruence_class needs modulus >= 2, got {modulus}")
    return n % modulus in {r % modulus for r in residues}


MOD40_DEPTH3 = pm(3, 13)     # the "q = ±3, ±13 (mod 40)" clause
MOD40_TABLE3 = pm(11, 19)


def mod40_clause(q: int) -> bool:
    return congruence_class(q, 40, MOD40_DEPTH3)


def prime_power(q: int) -> tuple[int, int]:
    """Return (p, f) with q = p^f, or raise if q is not a prime power."""
    if q < 2:
        raise ArithmeticDomainError(f"{q} is not a prime power")
    fs = factorize(q).factors
    if len(fs) != 1:
        raise ArithmeticDomainError(f"{q} is not a prime power")
    return fs[0]


def is_prime_power(q: int) -> bool:
    try:
        prime_power(q)
        return True
    except ArithmeticDomainError:
        return False


def format_factorization(fact: Factorization) -> str:
    if not fact.factors:
        return "1"
    return "·".join(f"{p}^{e}" if e > 1 else str(p) for p, e in fact.factors)


# --- Sieves ---

def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p: limit + 1: p] = False
    return np.flatnonzero(flags).astype(np.int64)


def prime_range(lo: int, hi: int, base: np.ndarray | None = None) -> np.ndarray:
    """Primes in [lo, hi] by an odd-only segmented sieve over `base` primes <= sqrt(hi)."""
    if hi < 2 or hi < lo:
        return np.array([], dtype=np.int64)
    lo = max(lo, 2)
    if base is None:
        base = simple_sieve(math.isqrt(hi) + 1)
    head = [2] if lo <= 2 <= hi else []
    low = max(lo, 3)
    if low % 2 == 0:
        low += 1
    if low > hi:
        return np.array(head, dtype=np.int64)
    odd_count = (hi - low) // 2 + 1
    mask = np.ones(odd_count, dtype=bool)
    for p in base:
        p = int(p)
        if p == 2:
            continue
        if p * p > hi:
            break
        start = max(p * p, ((low + p - 1) // p) * p)
        if start % 2 == 0:
            start += p
        if start > hi:
            continue
        mask[(start - low) // 2::p] = False
    body = low + 2 * np.flatnonzero(mask).astype(np.int64)
    return np.concatenate([np.array(head, dtype=np.int64), body])


def omega_range(lo: int, hi: int, base: np.ndarray | None = None) -> np.ndarray:
    """Big-omega of every integer in [lo, hi] (lo >= 1) by a segmented sieve.

    Each prime power p^k <= hi that divides n contributes one; what is left
    after dividing out the base primes is 1 or a single large prime.
    """
    if lo < 1:
        raise ArithmeticDomainError(f"omega_range needs lo >= 1, got {lo}")
    if hi < lo:
        return np.array([], dtype=np.int16)
    if base is None:
        base = simple_sieve(math.isqrt(hi) + 1)
    rest = np.arange(lo, hi + 1, dtype=np.int64)
    counts = np.zeros(hi - lo + 1, dtype=np.int16)
    for p in base:
        p = int(p)
        if p * p > hi:
            break
        pk = p
        while pk <= hi:
            start = (-lo) % pk
            counts[start::pk] += 1
            rest[start::pk] //= p
            pk *= p
    counts += (rest > 1).astype(np.int16)
    return counts
