"""
Symbolic group identifiers: grammar, validation, orders, Borel-subgroup orders,
twisted ranks, isomorphism aliases and the enumerations used by scans.
"""

import logging
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator

from arithmetic import factorize, is_prime, is_prime_power, omega, prime_power
from enums import Family, Sign
from errors import GroupIdSyntaxError, GroupIdValidityError, UnsupportedFamilyError

logger = logging.getLogger(__name__)

SPORADIC_ORDERS: dict[str, int] = {
    "M11": 7920,
    "M12": 95040,
    "M22": 443520,
    "M23": 10200960,
    "M24": 244823040,
    "J1": 175560,
    "J2": 604800,
    "J3": 50232960,
    "J4": 86775571046077562880,
    "HS": 44352000,
    "McL": 898128000,
    "Suz": 448345497600,
    "He": 4030387200,
    "Ly": 51765179004000000,
    "ON": 460815505920,
    "Ru": 145926144000,
    "Co1": 4157776806543360000,
    "Co2": 42305421312000,
    "Co3": 495766656000,
    "Fi22": 64561751654400,
    "Fi23": 4089470473293004800,
    "Fi24'": 1255205709190661721292800,
    "HN": 273030912000000,
    "Th": 90745943887872000,
    "B": 4154781481226426191177580544000000,
    "M": 808017424794512875886459904961710757005754368000000000,
}
TITS_ORDER = 17971200
TITS_TOKEN = "TF4(2)'"

# |Out(T)| for the sporadic groups; the rest have trivial outer automorphism group.
SPORADIC_OUTER_TWO = {"M12", "M22", "J2", "J3", "HS", "McL", "Suz", "He", "ON", "Fi22", "Fi24'", "HN"}

LIE_FAMILIES = {
    Family.LINEAR, Family.SYMPLECTIC, Family.ORTHOGONAL, Family.SUZUKI, Family.REE,
    Family.TRIALITY, Family.TWISTED_F4, Family.G2, Family.E6, Family.E7, Family.E8,
}


@dataclass(frozen=True)
class GroupId:
    """Immutable group identifier: a family plus integer parameters or component ids."""
    family: Family
    params: tuple[int, ...] = ()
    sign: Sign | None = None
    parts: tuple["GroupId", ...] = ()
    name: str = ""

    def __str__(self) -> str:
        return render(self)

    @property
    def q(self) -> int:
        """Field size of a Lie-type id (last parameter)."""
        return self.params[-1]

    @property
    def n(self) -> int:
        return self.params[0]


# --- Constructors ---

def alternating(n: int) -> GroupId:
    return GroupId(Family.ALTERNATING, (n,))

def symmetric(n: int) -> GroupId:
    return GroupId(Family.SYMMETRIC, (n,))

def cyclic(n: int) -> GroupId:
    return GroupId(Family.CYCLIC, (n,))

def dihedral(order: int) -> GroupId:
    return GroupId(Family.DIHEDRAL, (order,))

def linear(n: int, q: int) -> GroupId:
    return GroupId(Family.LINEAR, (n, q), Sign.PLUS)

def unitary(n: int, q: int) -> GroupId:
    return GroupId(Family.LINEAR, (n, q), Sign.MINUS)

def special_linear(n: int, q: int, sign: Sign = Sign.PLUS) -> GroupId:
    return GroupId(Family.SPECIAL_LINEAR, (n, q), sign)

def projective_general(n: int, q: int, sign: Sign = Sign.PLUS) -> GroupId:
    return GroupId(Family.PROJECTIVE_GENERAL, (n, q), sign)

def symplectic(dim: int, q: int) -> GroupId:
    return GroupId(Family.SYMPLECTIC, (dim, q))

def orthogonal(sign: Sign, dim: int, q: int) -> GroupId:
    return GroupId(Family.ORTHOGONAL, (dim, q), sign)

def suzuki(q: int) -> GroupId:
    return GroupId(Family.SUZUKI, (q,))

def ree(q: int) -> GroupId:
    return GroupId(Family.REE, (q,))

def triality(q: int) -> GroupId:
    return GroupId(Family.TRIALITY, (q,))

def twisted_f4(q: int) -> GroupId:
    return GroupId(Family.TWISTED_F4, (q,))

def tits() -> GroupId:
    return GroupId(Family.TITS)

def g2(q: int) -> GroupId:
    return GroupId(Family.G2, (q,))

def e6(q: int, sign: Sign = Sign.PLUS) -> GroupId:
    return GroupId(Family.E6, (q,), sign)

def e7(q: int) -> GroupId:
    return GroupId(Family.E7, (q,))

def e8(q: int) -> GroupId:
    return GroupId(Family.E8, (q,))

def sporadic(name: str) -> GroupId:
    return GroupId(Family.SPORADIC, name=name)

def product(*parts: GroupId) -> GroupId:
    flat: list[GroupId] = []
    for part in parts:
        flat.extend(part.parts if part.family is Family.PRODUCT else (part,))
    return GroupId(Family.PRODUCT, parts=tuple(flat))

def central(p: int, base: GroupId) -> GroupId:
    return GroupId(Family.CENTRAL, (p,), parts=(base,))

def extension(base: GroupId, p: int) -> GroupId:
    return GroupId(Family.EXTENSION, (p,), parts=(base,))

def wreath(base: GroupId, p: int) -> GroupId:
    return GroupId(Family.WREATH, (p,), parts=(base,))


# --- Grammar ---

_PAIR_TOKENS = {
    "L": (Family.LINEAR, Sign.PLUS), "U": (Family.LINEAR, Sign.MINUS),
    "SL": (Family.SPECIAL_LINEAR, Sign.PLUS), "SU": (Family.SPECIAL_LINEAR, Sign.MINUS),
    "PGL": (Family.PROJECTIVE_GENERAL, Sign.PLUS), "PGU": (Family.PROJECTIVE_GENERAL, Sign.MINUS),
    "PSp": (Family.SYMPLECTIC, None),
}
_SINGLE_TOKENS = {
    "A": Family.ALTERNATING, "S": Family.SYMMETRIC, "C": Family.CYCLIC, "D": Family.DIHEDRAL,
}
_FIELD_TOKENS = {
    "Sz": (Family.SUZUKI, None), "R": (Family.REE, None), "G2": (Family.G2, None),
    "TD4": (Family.TRIALITY, None), "TF4": (Family.TWISTED_F4, None),
    "E6": (Family.E6, Sign.PLUS), "2E6": (Family.E6, Sign.MINUS),
    "E7": (Family.E7, None), "E8": (Family.E8, None),
}

_RE_SINGLE = re.compile(r"^(A|S|C|D)\((\d+)\)$")
_RE_PAIR = re.compile(r"^(L|U|SL|SU|PGL|PGU|PSp)\((\d+),(\d+)\)$")
_RE_FIELD = re.compile(r"^(Sz|R|G2|TD4|TF4|E6|2E6|E7|E8)\((\d+)\)('?)$")
_RE_ORTHOGONAL = re.compile(r"^O\(([+\-0]),(\d+),(\d+)\)$")
_RE_CENTRAL = re.compile(r"^(\d+)\.(.+)$")
_RE_WREATH = re.compile(r"^(.+)wr(\d+)$")
_RE_EXTENSION = re.compile(r"^(.+)\.(\d+)$")


def _split_product(text: str) -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise GroupIdSyntaxError(f"Unbalanced parentheses in '{text}'")
        elif ch == "x" and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise GroupIdSyntaxError(f"Unbalanced parentheses in '{text}'")
    parts.append(text[start:])
    if any(not p for p in parts):
        raise GroupIdSyntaxError(f"Empty factor in product '{text}'")
    return parts


def parse_group_id(text: str) -> GroupId:
    """Parse and validate a group-id string such as 'L(2,7)', '2.A(7)' or 'A(5)xC(2)'."""
    cleaned = "".join(text.split())
    if not cleaned:
        raise GroupIdSyntaxError("Empty group id")
    factors = _split_product(cleaned)
    if len(factors) == 1:
        return _parse_factor(factors[0])
    return product(*(_parse_factor(f) for f in factors))


def _parse_prime_suffix(token: str, whole: str) -> int:
    p = int(token)
    if not is_prime(p):
        raise GroupIdValidityError(f"'{whole}': extension degree {p} is not prime")
    return p


def _parse_factor(text: str) -> GroupId:
    m = _RE_CENTRAL.match(text)
    if m:
        return _validated(central(_parse_prime_suffix(m.group(1), text), _parse_factor(m.group(2))))
    m = _RE_WREATH.match(text)
    if m:
        return _validated(wreath(_parse_factor(m.group(1)), _parse_prime_suffix(m.group(2), text)))
    m = _RE_EXTENSION.match(text)
    if m:
        return _validated(extension(_parse_factor(m.group(1)), _parse_prime_suffix(m.group(2), text)))
    return _validated(_parse_atom(text))


def _parse_atom(text: str) -> GroupId:
    if text in SPORADIC_ORDERS:
        return sporadic(text)
    if text == TITS_TOKEN:
        return tits()
    m = _RE_SINGLE.match(text)
    if m:
        return GroupId(_SINGLE_TOKENS[m.group(1)], (int(m.group(2)),))
    m = _RE_PAIR.match(text)
    if m:
        family, sign = _PAIR_TOKENS[m.group(1)]
        return GroupId(family, (int(m.group(2)), int(m.group(3))), sign)
    m = _RE_FIELD.match(text)
    if m:
        token, q, derived = m.group(1), int(m.group(2)), bool(m.group(3))
        if derived:
            # derived-subgroup tokens of the three non-simple small members
            if (token, q) == ("R", 3):
                return linear(2, 8)
            if (token, q) == ("G2", 2):
                return unitary(3, 3)
            raise GroupIdSyntaxError(f"Unknown derived-subgroup token '{text}'")
        family, sign = _FIELD_TOKENS[token]
        return GroupId(family, (q,), sign)
    m = _RE_ORTHOGONAL.match(text)
    if m:
        return orthogonal(Sign(m.group(1)), int(m.group(2)), int(m.group(3)))
    raise GroupIdSyntaxError(f"Cannot parse group id '{text}'")


def _require_prime_power(q: int, text: str) -> tuple[int, int]:
    if not is_prime_power(q):
        raise GroupIdValidityError(f"{text}: q = {q} is not a prime power")
    return prime_power(q)


def _validated(g: GroupId) -> GroupId:
    validate(g)
    return g


def validate(g: GroupId) -> None:
    """Raise GroupIdValidityError when the parameters violate the family constraints."""
    text = render(g)
    fam = g.family
    if fam is Family.ALTERNATING and g.n < 3:
        raise GroupIdValidityError(f"{text}: alternating groups need n >= 3")
    if fam is Family.SYMMETRIC and g.n < 2:
        raise GroupIdValidityError(f"{text}: symmetric groups need n >= 2")
    if fam is Family.CYCLIC and g.n < 1:
        raise GroupIdValidityError(f"{text}: cyclic groups need n >= 1")
    if fam is Family.DIHEDRAL and (g.n < 4 or g.n % 2):
        raise GroupIdValidityError(f"{text}: dihedral order must be even and >= 4")
    if fam in (Family.LINEAR, Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL):
        n, q = g.params
        _require_prime_power(q, text)
        if n < 2:
            raise GroupIdValidityError(f"{text}: dimension must be >= 2")
    if fam is Family.SYMPLECTIC:
        dim, q = g.params
        _require_prime_power(q, text)
        if dim < 2 or dim % 2:
            raise GroupIdValidityError(f"{text}: symplectic dimension must be even")
    if fam is Family.ORTHOGONAL:
        dim, q = g.params
        p, _ = _require_prime_power(q, text)
        if g.sign is Sign.ZERO and (dim % 2 == 0 or dim < 7 or p == 2):
            raise GroupIdValidityError(f"{text}: O(0,dim,q) needs odd dim >= 7 and odd q")
        if g.sign is not Sign.ZERO and (dim % 2 or dim < 8):
            raise GroupIdValidityError(f"{text}: O(±,dim,q) needs even dim >= 8")
    if fam is Family.SUZUKI:
        p, f = _require_prime_power(g.q, text)
        if p != 2 or f < 3 or f % 2 == 0:
            raise GroupIdValidityError(f"{text}: Suzuki groups need q = 2^f with f >= 3 odd")
    if fam is Family.REE:
        p, f = _require_prime_power(g.q, text)
        if p != 3 or f % 2 == 0:
            raise GroupIdValidityError(f"{text}: Ree groups need q = 3^f with f odd")
        if f == 1:
            raise GroupIdValidityError(f"{text}: R(3) is not simple; use R(3)' (= L(2,8))")
    if fam is Family.TWISTED_F4:
        p, f = _require_prime_power(g.q, text)
        if p != 2 or f % 2 == 0:
            raise GroupIdValidityError(f"{text}: 2F4(q) needs q = 2^f with f odd")
        if f == 1:
            raise GroupIdValidityError(f"{text}: 2F4(2) is not simple; use {TITS_TOKEN}")
    if fam is Family.G2:
        _require_prime_power(g.q, text)
        if g.q == 2:
            raise GroupIdValidityError(f"{text}: G2(2) is not simple; use G2(2)' (= U(3,3))")
    if fam in (Family.TRIALITY, Family.E6, Family.E7, Family.E8):
        _require_prime_power(g.q, text)
    if fam in (Family.CENTRAL, Family.EXTENSION, Family.WREATH) and not is_prime(g.params[0]):
        raise GroupIdValidityError(f"{text}: {g.params[0]} is not prime")


def render(g: GroupId) -> str:
    """Bit-exact ASCII rendering; parse_group_id(render(g)) == g for parsed ids."""
    fam = g.family
    if fam is Family.SPORADIC:
        return g.name
    if fam is Family.TITS:
        return TITS_TOKEN
    if fam in (Family.ALTERNATING, Family.SYMMETRIC, Family.CYCLIC, Family.DIHEDRAL):
        token = {v: k for k, v in _SINGLE_TOKENS.items()}[fam]
        return f"{token}({g.n})"
    if fam in (Family.LINEAR, Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL, Family.SYMPLECTIC):
        token = next(k for k, v in _PAIR_TOKENS.items() if v == (fam, g.sign))
        return f"{token}({g.params[0]},{g.params[1]})"
    if fam is Family.ORTHOGONAL:
        return f"O({g.sign.value},{g.params[0]},{g.params[1]})"
    if fam in (Family.SUZUKI, Family.REE, Family.G2, Family.TRIALITY, Family.TWISTED_F4,
               Family.E6, Family.E7, Family.E8):
        token = next(k for k, v in _FIELD_TOKENS.items() if v == (fam, g.sign))
        return f"{token}({g.q})"
    if fam is Family.PRODUCT:
        return "x".join(render(p) for p in g.parts)
    if fam is Family.CENTRAL:
        return f"{g.params[0]}.{render(g.parts[0])}"
    if fam is Family.EXTENSION:
        return f"{render(g.parts[0])}.{g.params[0]}"
    if fam is Family.WREATH:
        return f"{render(g.parts[0])}wr{g.params[0]}"
    raise UnsupportedFamilyError(f"Cannot render family {fam}")


# --- Orders ---

def _prod(values: Iterable[int]) -> int:
    return math.prod(values)


def order(g: GroupId) -> int:
    fam = g.family
    if fam is Family.ALTERNATING:
        return math.factorial(g.n) // 2
    if fam is Family.SYMMETRIC:
        return math.factorial(g.n)
    if fam in (Family.CYCLIC, Family.DIHEDRAL):
        return g.n
    if fam is Family.SPORADIC:
        return SPORADIC_ORDERS[g.name]
    if fam is Family.TITS:
        return TITS_ORDER
    if fam is Family.PRODUCT:
        return _prod(order(p) for p in g.parts)
    if fam in (Family.CENTRAL, Family.EXTENSION):
        return g.params[0] * order(g.parts[0])
    if fam is Family.WREATH:
        p = g.params[0]
        return order(g.parts[0]) ** p * p
    if fam in (Family.LINEAR, Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL):
        n, q = g.params
        eps = g.sign.value_int
        full = q ** (n * (n - 1) // 2) * _prod(q ** i - eps ** i for i in range(2, n + 1))
        if fam is Family.LINEAR:
            return full // math.gcd(n, q - eps)
        return full
    if fam is Family.SYMPLECTIC:
        dim, q = g.params
        m = dim // 2
        return q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1)) // math.gcd(2, q - 1)
    if fam is Family.ORTHOGONAL:
        dim, q = g.params
        if g.sign is Sign.ZERO:
            m = (dim - 1) // 2
            return q ** (m * m) * _prod(q ** (2 * i) - 1 for i in range(1, m + 1)) // 2
        m = dim // 2
        eps = g.sign.value_int
        return (q ** (m * (m - 1)) * (q ** m - eps) * _prod(q ** (2 * i) - 1 for i in range(1, m))
                // math.gcd(4, q ** m - eps))
    q = g.q if g.params else 0
    if fam is Family.SUZUKI:
        return q ** 2 * (q ** 2 + 1) * (q - 1)
    if fam is Family.REE:
        return q ** 3 * (q ** 3 + 1) * (q - 1)
    if fam is Family.G2:
        return q ** 6 * (q ** 6 - 1) * (q ** 2 - 1)
    if fam is Family.TRIALITY:
        return q ** 12 * (q ** 8 + q ** 4 + 1) * (q ** 6 - 1) * (q ** 2 - 1)
    if fam is Family.TWISTED_F4:
        return q ** 12 * (q ** 6 + 1) * (q ** 4 - 1) * (q ** 3 + 1) * (q - 1)
    if fam is Family.E6:
        eps = g.sign.value_int
        return (q ** 36 * _prod(q ** i - eps ** i for i in (12, 9, 8, 6, 5, 2))
                // math.gcd(3, q - eps))
    if fam is Family.E7:
        return q ** 63 * _prod(q ** i - 1 for i in (18, 14, 12, 10, 8, 6, 2)) // math.gcd(2, q - 1)
    if fam is Family.E8:
        return q ** 120 * _prod(q ** i - 1 for i in (30, 24, 20, 18, 14, 12, 8, 2))
    raise UnsupportedFamilyError(f"No order formula for {render(g)}")


# --- Lie-type data ---

def is_lie_type(g: GroupId) -> bool:
    return g.family in LIE_FAMILIES


def lie_parameters(g: GroupId) -> tuple[int, int]:
    """(p, f) with q = p^f for a Lie-type id."""
    if not is_lie_type(g):
        raise UnsupportedFamilyError(f"{render(g)} is not of Lie type")
    return prime_power(g.q)


def twisted_rank(g: GroupId) -> int:
    fam = g.family
    if fam is Family.LINEAR:
        n = g.n
        return n - 1 if g.sign is Sign.PLUS else n // 2
    if fam is Family.SYMPLECTIC:
        return g.params[0] // 2
    if fam is Family.ORTHOGONAL:
        dim = g.params[0]
        if g.sign is Sign.ZERO:
            return (dim - 1) // 2
        return dim // 2 if g.sign is Sign.PLUS else dim // 2 - 1
    if fam in (Family.SUZUKI, Family.REE):
        return 1
    if fam in (Family.TRIALITY, Family.G2, Family.TWISTED_F4):
        return 2
    if fam is Family.E6:
        return 6 if g.sign is Sign.PLUS else 4
    if fam is Family.E7:
        return 7
    if fam is Family.E8:
        return 8
    raise UnsupportedFamilyError(f"{render(g)} is not of Lie type; twisted rank undefined")


def borel_factors(g: GroupId) -> tuple[list[tuple[int, int]], int]:
    """Borel order as ([(base, exponent), ...], divisor) so Omega can be taken additively."""
    fam = g.family
    if not is_lie_type(g):
        raise UnsupportedFamilyError(f"No Borel subgroup for {render(g)}")
    q = g.q
    if fam is Family.LINEAR:
        n = g.n
        if g.sign is Sign.PLUS:
            r = n - 1
            return [(q, r * (r + 1) // 2), (q - 1, r)], math.gcd(r + 1, q - 1)
        r = n // 2
        if n % 2:
            return [(q, r * (2 * r + 1)), (q * q - 1, r)], math.gcd(2 * r + 1, q + 1)
        # torus of the even-dimensional unitary Borel has order (q^2-1)^r/(q+1)
        return [(q, r * (2 * r - 1)), (q * q - 1, r - 1), (q - 1, 1)], math.gcd(2 * r, q + 1)
    if fam is Family.SYMPLECTIC:
        r = g.params[0] // 2
        return [(q, r * r), (q - 1, r)], math.gcd(2, q - 1)
    if fam is Family.ORTHOGONAL:
        dim = g.params[0]
        if g.sign is Sign.ZERO:
            r = (dim - 1) // 2
            return [(q, r * r), (q - 1, r)], 2
        r = dim // 2
        if g.sign is Sign.PLUS:
            return [(q, r * (r - 1)), (q - 1, r)], math.gcd(4, q ** r - 1)
        return [(q, r * (r - 1)), (q - 1, r - 2), (q * q - 1, 1)], math.gcd(4, q ** r + 1)
    if fam is Family.SUZUKI:
        return [(q, 2), (q - 1, 1)], 1
    if fam is Family.REE:
        return [(q, 3), (q - 1, 1)], 1
    if fam is Family.G2:
        return [(q, 6), (q - 1, 2)], 1
    if fam is Family.TRIALITY:
        return [(q, 12), (q ** 3 - 1, 1), (q - 1, 1)], 1
    if fam is Family.TWISTED_F4:
        return [(q, 12), (q - 1, 2)], 1
    if fam is Family.E6:
        if g.sign is Sign.PLUS:
            return [(q, 36), (q - 1, 6)], math.gcd(3, q - 1)
        return [(q, 36), (q - 1, 2), (q * q - 1, 2)], math.gcd(3, q + 1)
    if fam is Family.E7:
        return [(q, 63), (q - 1, 7)], math.gcd(2, q - 1)
    if fam is Family.E8:
        return [(q, 120), (q - 1, 8)], 1
    raise UnsupportedFamilyError(f"No Borel order for {render(g)}")


def borel_order(g: GroupId) -> int:
    terms, divisor = borel_factors(g)
    return _prod(base ** e for base, e in terms) // divisor


def borel_omega(g: GroupId) -> int:
    terms, divisor = borel_factors(g)
    return sum(e * omega(base) for base, e in terms if base > 1) - omega(divisor)


# --- Aliases and structure ---

def normalize(g: GroupId) -> GroupId:
    """Map an id to the canonical member of its isomorphism class."""
    fam = g.family
    if fam is Family.PRODUCT:
        return product(*(normalize(p) for p in g.parts))
    if fam in (Family.CENTRAL, Family.EXTENSION, Family.WREATH):
        return GroupId(fam, g.params, g.sign, (normalize(g.parts[0]),), g.name)
    if fam is Family.ALTERNATING:
        return {5: linear(2, 4), 6: linear(2, 9)}.get(g.n, g)
    if fam is Family.DIHEDRAL and g.n == 6:
        return symmetric(3)
    if fam is Family.LINEAR:
        n, q = g.params
        if n == 2 and g.sign is Sign.MINUS:
            return normalize(linear(2, q))
        if g.sign is Sign.PLUS:
            if n == 2:
                return {2: symmetric(3), 3: alternating(4), 5: linear(2, 4)}.get(q, g)
            if (n, q) == (3, 2):
                return linear(2, 7)
            if (n, q) == (4, 2):
                return alternating(8)
        return g
    if fam is Family.SYMPLECTIC:
        dim, q = g.params
        if dim == 2:
            return normalize(linear(2, q))
        if (dim, q) == (4, 2):
            return symmetric(6)
        if (dim, q) == (4, 3):
            return unitary(4, 2)
        return g
    if fam in (Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL):
        n, q = g.params
        sign = g.sign
        if n == 2 and sign is Sign.MINUS:
            return normalize(GroupId(fam, (2, q), Sign.PLUS))
        if math.gcd(n, q - sign.value_int) == 1:
            return normalize(GroupId(Family.LINEAR, (n, q), sign))
        if fam is Family.PROJECTIVE_GENERAL and (n, q, sign) == (2, 5, Sign.PLUS):
            return symmetric(5)
        if fam is Family.PROJECTIVE_GENERAL and (n, q, sign) == (2, 3, Sign.PLUS):
            return symmetric(4)
        return g
    return g


def is_nonabelian_simple(g: GroupId) -> bool:
    g = normalize(g)
    fam = g.family
    if fam in (Family.SPORADIC, Family.TITS, Family.SUZUKI, Family.REE, Family.TRIALITY,
               Family.TWISTED_F4, Family.G2, Family.E6, Family.E7, Family.E8, Family.ORTHOGONAL):
        return True
    if fam is Family.ALTERNATING:
        return g.n >= 5
    if fam is Family.LINEAR:
        n, q = g.params
        if g.sign is Sign.PLUS:
            return n >= 3 or q >= 4
        return n >= 3 and (n, q) != (3, 2)
    if fam is Family.SYMPLECTIC:
        return True
    return False


def is_simple(g: GroupId) -> bool:
    g = normalize(g)
    if g.family is Family.CYCLIC:
        return is_prime(g.n)
    return is_nonabelian_simple(g)


def is_soluble(g: GroupId) -> bool:
    g = normalize(g)
    fam = g.family
    if fam in (Family.CYCLIC, Family.DIHEDRAL):
        return True
    if fam in (Family.ALTERNATING, Family.SYMMETRIC):
        return g.n <= 4
    if fam is Family.LINEAR:
        return not is_nonabelian_simple(g)
    if fam in (Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL):
        n, q = g.params
        return n == 2 and q <= 3
    if fam is Family.PRODUCT:
        return all(is_soluble(p) for p in g.parts)
    if fam in (Family.CENTRAL, Family.EXTENSION, Family.WREATH):
        return is_soluble(g.parts[0])
    return False


def is_p_group(g: GroupId) -> bool:
    return len(factorize(order(g)).factors) <= 1


def chief_length_soluble(g: GroupId) -> int | None:
    """Chief length of a soluble catalog id, or None when not determined structurally."""
    g = normalize(g)
    if not is_soluble(g):
        return None
    if is_p_group(g):
        return omega(order(g))
    fam = g.family
    if fam is Family.CYCLIC:
        return omega(g.n)
    if fam is Family.DIHEDRAL:
        return omega(g.n // 2) + 1
    if fam is Family.PRODUCT:
        lengths = [chief_length_soluble(p) for p in g.parts]
        return None if any(v is None for v in lengths) else sum(lengths)
    if fam is Family.CENTRAL:
        inner = chief_length_soluble(g.parts[0])
        return None if inner is None else inner + 1
    small = {
        "S(3)": 2, "A(4)": 2, "S(4)": 3, "U(3,2)": 4, "SL(2,3)": 3,
    }
    return small.get(render(g))


def supersoluble_soluble(g: GroupId) -> bool | None:
    """Supersolubility of a soluble catalog id, or None when not decided structurally."""
    g = normalize(g)
    if not is_soluble(g):
        return False
    fam = g.family
    if fam in (Family.CYCLIC, Family.DIHEDRAL) or is_p_group(g):
        return True
    if fam is Family.SYMMETRIC and g.n <= 3:
        return True
    if fam is Family.PRODUCT:
        flags = [supersoluble_soluble(p) for p in g.parts]
        if all(f is True for f in flags):
            return True
        if any(f is False for f in flags):
            return False
        return None
    if render(g) in ("A(4)", "S(4)", "U(3,2)", "SL(2,3)"):
        return False
    return None


def outer_order(g: GroupId) -> int:
    """|Out(T)| for a non-abelian simple id."""
    g = normalize(g)
    fam = g.family
    if fam is Family.SPORADIC:
        return 2 if g.name in SPORADIC_OUTER_TWO else 1
    if fam is Family.TITS:
        return 2
    if fam is Family.ALTERNATING:
        return 2
    if not is_lie_type(g):
        raise UnsupportedFamilyError(f"No outer automorphism data for {render(g)}")
    p, f = lie_parameters(g)
    q = g.q
    if fam is Family.LINEAR:
        n = g.n
        if g.sign is Sign.PLUS:
            return math.gcd(2, q - 1) * f if n == 2 else 2 * math.gcd(n, q - 1) * f
        return math.gcd(n, q + 1) * 2 * f
    if fam is Family.SYMPLECTIC:
        dim = g.params[0]
        graph = 2 if dim == 4 and p == 2 else 1
        return math.gcd(2, q - 1) * f * graph
    if fam in (Family.SUZUKI, Family.REE, Family.TWISTED_F4, Family.E8):
        return f
    if fam is Family.G2:
        return f * (2 if p == 3 else 1)
    if fam is Family.TRIALITY:
        return 3 * f
    if fam is Family.E6:
        if g.sign is Sign.PLUS:
            return 2 * math.gcd(3, q - 1) * f
        return math.gcd(3, q + 1) * 2 * f
    if fam is Family.E7:
        return math.gcd(2, q - 1) * f
    raise UnsupportedFamilyError(f"No outer automorphism data for {render(g)}")


def nonabelian_factors(g: GroupId) -> list[GroupId]:
    """Non-abelian composition factors (canonical ids), with multiplicity."""
    g = normalize(g)
    if is_soluble(g):
        return []
    fam = g.family
    if is_nonabelian_simple(g):
        return [g]
    if fam is Family.PRODUCT:
        return [t for p in g.parts for t in nonabelian_factors(p)]
    if fam in (Family.CENTRAL, Family.EXTENSION):
        return nonabelian_factors(g.parts[0])
    if fam is Family.WREATH:
        return nonabelian_factors(g.parts[0]) * g.params[0]
    if fam is Family.SYMMETRIC:
        return [normalize(alternating(g.n))]
    if fam in (Family.SPECIAL_LINEAR, Family.PROJECTIVE_GENERAL):
        n, q = g.params
        return [normalize(GroupId(Family.LINEAR, (n, q), g.sign))]
    raise UnsupportedFamilyError(f"No composition data for {render(g)}")


def composition_factors(g: GroupId) -> list[GroupId]:
    """Composition factors with multiplicity: the non-abelian ones, then C(p) per prime."""
    simple = nonabelian_factors(g)
    rest = order(g) // _prod(order(t) for t in simple)
    cyclic_part = [cyclic(p) for p, e in factorize(rest).factors for _ in range(e)]
    return simple + cyclic_part


def radical_quotient(g: GroupId) -> GroupId | None:
    """G/R(G) as an id, or None when G is soluble."""
    g = normalize(g)
    if is_soluble(g):
        return None
    fam = g.family
    if is_nonabelian_simple(g) or fam in (Family.EXTENSION, Family.SYMMETRIC):
        return g
    if fam is Family.PRODUCT:
        parts = [q for q in (radical_quotient(p) for p in g.parts) if q is not None]
        return parts[0] if len(parts) == 1 else product(*parts)
    if fam is Family.CENTRAL:
        return radical_quotient(g.parts[0])
    if fam is Family.SPECIAL_LINEAR:
        n, q = g.params
        return normalize(GroupId(Family.LINEAR, (n, q), g.sign))
    if fam is Family.PROJECTIVE_GENERAL:
        return g
    if fam is Family.WREATH:
        return wreath(radical_quotient(g.parts[0]), g.params[0])
    raise UnsupportedFamilyError(f"No radical data for {render(g)}")


# --- Enumeration for scans ---

SCAN_FAMILIES = ("A", "L2", "L", "U", "PSp", "Sz", "R", "G2", "TD4", "TF4", "E", "O", "sporadic")


def _prime_powers(lo: int, hi: int) -> Iterator[int]:
    for q in range(lo, hi + 1):
        if is_prime_power(q):
            yield q


def iter_simple_groups(q_max: int | None = None, max_order: int | None = None,
                       families: Iterable[str] | None = None,
                       rank_max: int = 3) -> Iterator[GroupId]:
    """Canonical non-abelian simple ids in a deterministic order.

    `q_max` bounds field sizes (and n for alternating groups); `max_order`
    bounds group orders. At least one bound is required. Without `max_order`,
    Lie families of rank > 1 stop at `rank_max` and the E-types are skipped.
    """
    if q_max is None and max_order is None:
        raise ValueError("iter_simple_groups needs q_max or max_order")
    wanted = set(families) if families else set(SCAN_FAMILIES)
    unknown = wanted - set(SCAN_FAMILIES)
    if unknown:
        raise ValueError(f"Unknown scan families: {sorted(unknown)}")
    q_cap = q_max if q_max is not None else 10**9
    seen: set[GroupId] = set()

    def fits(g: GroupId) -> bool:
        return max_order is None or order(g) <= max_order

    def emit(g: GroupId) -> Iterator[GroupId]:
        canon = normalize(g)
        if canon not in seen and is_nonabelian_simple(canon):
            seen.add(canon)
            yield canon

    if "A" in wanted:
        n = 5
        while (q_max is None or n <= q_max) and fits(alternating(n)):
            yield from emit(alternating(n))
            n += 1
    if "L2" in wanted:
        q = 4
        while q <= q_cap and fits(linear(2, q)):
            if is_prime_power(q):
                yield from emit(linear(2, q))
            q += 1

    def lie_scan(make, dims: Iterable[int], q_lo: int = 2, q_ok=lambda q: True) -> Iterator[GroupId]:
        for d in dims:
            q = q_lo
            if not fits(make(d, q)) and max_order is not None and is_prime_power(q) and q_ok(q):
                break
            while q <= q_cap:
                if is_prime_power(q) and q_ok(q):
                    g = make(d, q)
                    if not fits(g):
                        break
                    yield from emit(g)
                q += 1

    def dims(start: int, step: int, rank_of) -> Iterator[int]:
        d = start
        while rank_of(d) <= (rank_max if max_order is None else 64):
            yield d
            d += step

    if "L" in wanted:
        yield from lie_scan(linear, dims(3, 1, lambda n: n - 1))
    if "U" in wanted:
        yield from lie_scan(unitary, dims(3, 1, lambda n: n // 2))
    if "PSp" in wanted:
        yield from lie_scan(symplectic, dims(4, 2, lambda d: d // 2))
    if "O" in wanted and max_order is not None:
        yield from lie_scan(lambda d, q: orthogonal(Sign.ZERO, d, q), dims(7, 2, lambda d: d // 2),
                            q_ok=lambda q: q % 2 == 1)
        yield from lie_scan(lambda d, q: orthogonal(Sign.PLUS, d, q), dims(8, 2, lambda d: d // 2))
        yield from lie_scan(lambda d, q: orthogonal(Sign.MINUS, d, q), dims(8, 2, lambda d: d // 2))

    def field_scan(make, qs: Iterable[int]) -> Iterator[GroupId]:
        for q in qs:
            if q > q_cap:
                break
            g = make(q)
            if not fits(g):
                break
            yield from emit(g)

    def powers(p: int, f_start: int, f_step: int) -> Iterator[int]:
        f = f_start
        while p ** f <= q_cap:
            yield p ** f
            f += f_step

    if "Sz" in wanted:
        yield from field_scan(suzuki, powers(2, 3, 2))
    if "R" in wanted:
        yield from field_scan(ree, powers(3, 3, 2))
    if "G2" in wanted:
        yield from field_scan(g2, _prime_powers(3, q_cap))
    if "TD4" in wanted:
        yield from field_scan(triality, _prime_powers(2, q_cap))
    if "TF4" in wanted:
        if fits(tits()):
            yield from emit(tits())
        yield from field_scan(twisted_f4, powers(2, 3, 2))
    if "E" in wanted and max_order is not None:
        for make in (e6, lambda q: e6(q, Sign.MINUS), e7, e8):
            yield from field_scan(make, _prime_powers(2, q_cap))
    if "sporadic" in wanted:
        for name, size in SPORADIC_ORDERS.items():
            if max_order is None or size <= max_order:
                yield from emit(sporadic(name))
