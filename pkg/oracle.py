# --- START OF FILE chainforge/oracle.py ---

"""
Brute-force ground truth on small permutation groups.

Every element is materialized, subgroups are element bitsets (Python ints)
and the full subgroup lattice is enumerated by joining cyclic subgroups.
The resulting chain lengths, chief length, radical and socle are then
compared with the formula engines by verify_against_engines().
"""

import itertools
import logging
from collections import deque
from dataclasses import dataclass

import networkx as nx
import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_add, gf_irreducible_p, gf_mul, gf_rem

import catalog
import chains
from arithmetic import factorize, prime_power
from catalog import GroupId
from enums import Family, Sign, VerdictKind
from errors import (InternalInconsistencyError, LatticeBudgetError, NotCoveredError, NotNormalError,
                    OracleCapError, UnconstructibleError, UnsupportedFamilyError)
from lattice import SubgroupLattice, chain_extremes, covering_pairs
from model import OracleReport, ValueOrRange, Verdict

logger = logging.getLogger(__name__)

MAX_DEGREE = 32
ORDER_CAP = 5000
JOIN_BUDGET = 10 ** 6
# Coset actions of quotients are regular-like and may need more points than a construction.
QUOTIENT_DEGREE_CAP = 1024

L2_FIELDS = frozenset({4, 5, 7, 8, 9, 11, 13})
PGL2_FIELDS = frozenset({5, 7, 9})
SL2_FIELDS = frozenset({5, 7})

# Every nonabelian simple group of order at most 5000, by order.
SIMPLE_ORDERS = {
    60: "L(2,4)", 168: "L(2,7)", 360: "L(2,9)", 504: "L(2,8)", 660: "L(2,11)",
    1092: "L(2,13)", 2448: "L(2,17)", 2520: "A(7)", 3420: "L(2,19)", 4080: "L(2,16)",
}


def _members(bits: int) -> list[int]:
    return [i for i, c in enumerate(reversed(bin(bits)[2:])) if c == "1"]


# --- Permutations ---

@dataclass(frozen=True)
class Perm:
    """A bijection of {0..degree-1}; products compose left to right."""
    images: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"Not a permutation: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, degree: int) -> "Perm":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: tuple[int, ...]) -> "Perm":
        images = list(range(degree))
        for cycle in cycles:
            for a, b in zip(cycle, cycle[1:] + cycle[:1]):
                images[a] = b
        return cls(tuple(images))

    @classmethod
    def from_mapping(cls, points: list, image_of) -> "Perm":
        position = {pt: i for i, pt in enumerate(points)}
        return cls(tuple(position[image_of(pt)] for pt in points))

    def __mul__(self, other: "Perm") -> "Perm":
        return Perm(tuple(other.images[i] for i in self.images))

    def inverse(self) -> "Perm":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Perm(tuple(inv))

    def shifted(self, offset: int, degree: int) -> "Perm":
        """This permutation acting on points offset.. inside a larger degree."""
        images = list(range(degree))
        for i, j in enumerate(self.images):
            images[offset + i] = offset + j
        return Perm(tuple(images))


class PermGroup:
    """A permutation group with all elements materialized in lexicographic order.

    Index 0 is always the identity. Products are looked up through cached
    right-multiplication columns, so group work runs on element indices.
    """

    def __init__(self, name: str, generators: list[Perm], degree: int | None = None,
                 order_cap: int = ORDER_CAP, degree_cap: int = MAX_DEGREE):
        degree = degree if degree is not None else (generators[0].degree if generators else 1)
        if degree > degree_cap:
            raise OracleCapError(f"{name}: degree {degree} exceeds the cap {degree_cap}")
        if any(s.degree != degree for s in generators):
            raise ValueError(f"{name}: generators of mixed degree")
        self.name = name
        self.degree = degree
        self.generators = list(dict.fromkeys(s for s in generators if s != Perm.identity(degree)))
        found = self._enumerate(order_cap)
        self.elements: list[tuple[int, ...]] = sorted(found)
        self._index = {e: i for i, e in enumerate(self.elements)}
        self._array = np.array(self.elements, dtype=np.uint16).reshape(len(self.elements), degree)
        self._columns: dict[int, list[int]] = {}
        self._inverse: list[int] | None = None
        self.generator_indices = [self._index[s.images] for s in self.generators]
        logger.debug("[PermGroup] %s: degree %d, order %d", name, degree, self.order)

    def _enumerate(self, order_cap: int) -> set[tuple[int, ...]]:
        identity = tuple(range(self.degree))
        found = {identity}
        frontier = [identity]
        gens = [s.images for s in self.generators]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = tuple(s[i] for i in x)
                    if y not in found:
                        found.add(y)
                        nxt.append(y)
                        if len(found) > order_cap:
                            raise OracleCapError(f"{self.name}: more than {order_cap} elements")
            frontier = nxt
        return found

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm: Perm) -> int:
        return self._index[perm.images]

    def column(self, s: int) -> list[int]:
        """column(s)[x] is the index of x*s."""
        col = self._columns.get(s)
        if col is None:
            prods = self._array[s][self._array]
            col = [self._index[r] for r in map(tuple, prods.tolist())]
            self._columns[s] = col
        return col

    def mul(self, a: int, b: int) -> int:
        return self.column(b)[a]

    def inv(self, a: int) -> int:
        if self._inverse is None:
            inverse = np.argsort(self._array, axis=1)
            self._inverse = [self._index[r] for r in map(tuple, inverse.tolist())]
        return self._inverse[a]

    def conjugate(self, a: int, s: int) -> int:
        """s^-1 a s."""
        return self.mul(self.mul(self.inv(s), a), s)

    def commutator(self, a: int, b: int) -> int:
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def closure(self, gens: list[int] | tuple[int, ...], seed: int = 1) -> int:
        """Bitset of the subgroup generated by `gens`.

        `seed` is a subgroup already known to lie inside <gens>; the result is
        grown one right coset of it at a time.
        """
        cols = [self.column(s) for s in dict.fromkeys(gens) if s != 0]
        seed_members = _members(seed | 1)
        bits = seed | 1
        reps = [0]
        i = 0
        while i < len(reps):
            r = reps[i]
            i += 1
            for col in cols:
                y = col[r]
                if not bits >> y & 1:
                    coset = self.column(y)
                    for a in seed_members:
                        bits |= 1 << coset[a]
                    reps.append(y)
        return bits


# --- Small finite fields ---

class FiniteField:
    """GF(q) with elements coded 0..q-1 as base-p coefficient vectors, via sympy galoistools."""

    def __init__(self, q: int):
        p, f = prime_power(q)
        self.q, self.p = q, p
        modulus = self._irreducible(p, f)
        polys = [self._poly(k) for k in range(q)]
        self.add = np.array([[self._code(gf_add(a, b, p, ZZ)) for b in polys] for a in polys], dtype=np.int64)
        self.mul = np.array([[self._code(gf_rem(gf_mul(a, b, p, ZZ), modulus, p, ZZ)) for b in polys]
                             for a in polys], dtype=np.int64)
        self.neg = [int(np.flatnonzero(self.add[a] == 0)[0]) for a in range(q)]
        self.inv = [0] + [int(np.flatnonzero(self.mul[a] == 1)[0]) for a in range(1, q)]
        self.primitive = 1 if q == 2 else next(a for a in range(2, q) if self._mult_order(a) == q - 1)

    @staticmethod
    def _irreducible(p: int, f: int) -> list[int]:
        if f == 1:
            return [1, 0]
        for tail in itertools.product(range(p), repeat=f):
            poly = [1, *tail]
            if gf_irreducible_p(poly, p, ZZ):
                return poly
        raise InternalInconsistencyError(f"No irreducible polynomial of degree {f} over F_{p}")

    def _poly(self, k: int) -> list[int]:
        coeffs = []
        while k:
            coeffs.append(k % self.p)
            k //= self.p
        return coeffs[::-1]

    def _code(self, poly: list[int]) -> int:
        v = 0
        for c in poly:
            v = v * self.p + int(c)
        return v

    def _mult_order(self, a: int) -> int:
        x, k = a, 1
        while x != 1:
            x = int(self.mul[x, a])
            k += 1
        return k

    def power(self, a: int, k: int) -> int:
        x = 1
        for _ in range(k):
            x = int(self.mul[x, a])
        return x


INFINITY = "inf"


def _mobius(F: FiniteField, a: int, b: int, c: int, d: int) -> Perm:
    """x -> (ax + b) / (cx + d) on the projective line F_q with infinity last."""
    points = list(range(F.q)) + [INFINITY]

    def image(x):
        if x == INFINITY:
            return INFINITY if c == 0 else int(F.mul[a, F.inv[c]])
        num = int(F.add[F.mul[a, x], b])
        den = int(F.add[F.mul[c, x], d])
        return INFINITY if den == 0 else int(F.mul[num, F.inv[den]])

    return Perm.from_mapping(points, image)


def _projective_line_generators(q: int, full: bool) -> list[Perm]:
    F = FiniteField(q)
    scale = F.primitive if full else F.power(F.primitive, 2)
    return [_mobius(F, 1, 1, 0, 1), _mobius(F, scale, 0, 0, 1), _mobius(F, 0, F.neg[1], 1, 0)]


def _sl2_generators(p: int) -> list[Perm]:
    """SL2(p) on nonzero vectors of F_p^2, taken modulo squares when -1 is a non-square."""
    scalars = sorted({x * x % p for x in range(1, p)}) if p % 4 == 3 else [1]

    def canon(v):
        return min(((s * v[0]) % p, (s * v[1]) % p) for s in scalars)

    points = sorted({canon(v) for v in itertools.product(range(p), repeat=2) if v != (0, 0)})

    def acting(m):
        return Perm.from_mapping(points, lambda v: canon(((m[0] * v[0] + m[1] * v[1]) % p,
                                                          (m[2] * v[0] + m[3] * v[1]) % p)))

    return [acting((1, 1, 0, 1)), acting((0, p - 1, 1, 0))]


def _cyclic_generators(n: int) -> tuple[list[Perm], int]:
    """C_n as disjoint cycles of prime-power lengths."""
    if n == 1:
        return [], 1
    lengths = [p ** e for p, e in factorize(n).factors]
    degree = sum(lengths)
    cycles, start = [], 0
    for k in lengths:
        cycles.append(tuple(range(start, start + k)))
        start += k
    return [Perm.from_cycles(degree, *cycles)], degree


def _generators(g: GroupId) -> tuple[list[Perm], int]:
    fam = g.family
    if fam in (Family.ALTERNATING, Family.SYMMETRIC):
        n = g.n
        if n > MAX_DEGREE:
            raise OracleCapError(f"{catalog.render(g)}: degree {n} exceeds the cap {MAX_DEGREE}")
        if n < 3:
            return ([Perm.from_cycles(2, (0, 1))], 2) if fam is Family.SYMMETRIC and n == 2 else ([], max(n, 1))
        if fam is Family.SYMMETRIC:
            return [Perm.from_cycles(n, (0, 1)), Perm.from_cycles(n, tuple(range(n)))], n
        long_cycle = tuple(range(n)) if n % 2 else tuple(range(1, n))
        return [Perm.from_cycles(n, (0, 1, 2)), Perm.from_cycles(n, long_cycle)], n
    if fam is Family.CYCLIC:
        return _cyclic_generators(g.n)
    if fam is Family.DIHEDRAL:
        m = g.n
        if m <= 2:
            return _cyclic_generators(m)
        if m == 4:
            return [Perm.from_cycles(4, (0, 1), (2, 3)), Perm.from_cycles(4, (0, 2), (1, 3))], 4
        k = m // 2
        reflection = Perm(tuple((-i) % k for i in range(k)))
        return [Perm.from_cycles(k, tuple(range(k))), reflection], k
    if fam is Family.LINEAR and g.params[0] == 2 and g.sign is Sign.PLUS and g.q in L2_FIELDS:
        return _projective_line_generators(g.q, full=False), g.q + 1
    if fam is Family.PROJECTIVE_GENERAL and g.params[0] == 2 and g.sign is Sign.PLUS \
            and g.q in PGL2_FIELDS:
        return _projective_line_generators(g.q, full=True), g.q + 1
    if fam is Family.SPECIAL_LINEAR and g.params[0] == 2 and g.sign is Sign.PLUS and g.q in SL2_FIELDS:
        gens = _sl2_generators(g.q)
        return gens, gens[0].degree
    if fam is Family.PRODUCT:
        built = [_generators(part) for part in g.parts]
        degree = sum(d for _, d in built)
        gens, offset = [], 0
        for part_gens, d in built:
            gens.extend(s.shifted(offset, degree) for s in part_gens)
            offset += d
        return gens, degree
    if fam is Family.WREATH:
        p = g.params[0]
        base_gens, d = _generators(g.parts[0])
        degree = d * p
        top = Perm(tuple((i + d) % degree for i in range(degree)))
        return [s.shifted(0, degree) for s in base_gens] + [top], degree
    canon = catalog.normalize(g)
    if canon != g:
        return _generators(canon)
    raise UnconstructibleError(f"No permutation construction for {catalog.render(g)}")


def construct(g: GroupId, order_cap: int = ORDER_CAP) -> PermGroup:
    """A faithful permutation group for a constructible id, of exactly catalog.order(g) elements."""
    name = catalog.render(g)
    try:
        expected = catalog.order(g)
    except UnsupportedFamilyError as e:
        raise UnconstructibleError(str(e)) from e
    if expected > order_cap:
        raise OracleCapError(f"{name}: order {expected} exceeds the cap {order_cap}")
    gens, degree = _generators(g)
    group = PermGroup(name, gens, degree, order_cap)
    if group.order != expected:
        raise InternalInconsistencyError(f"{name}: built {group.order} elements, expected {expected}")
    logger.info("[Oracle] Constructed %s on %d points, order %d", name, degree, group.order)
    return group


# --- Subgroups ---

def subgroup_lattice(G: PermGroup, join_budget: int = JOIN_BUDGET) -> SubgroupLattice:
    """All subgroups of G, as joins of cyclic subgroups."""
    cyclic: dict[int, int] = {}
    for x in range(1, G.order):
        bits = G.closure([x])
        cyclic.setdefault(bits, x)
    found: dict[int, tuple[int, ...]] = {1: ()}
    for bits, x in cyclic.items():
        found[bits] = (x,)
    queue = deque(cyclic)
    cyclic_gens = list(cyclic.values())
    joins = 0
    while queue:
        h = queue.popleft()
        gens = found[h]
        for x in cyclic_gens:
            if h >> x & 1:
                continue
            joins += 1
            if joins > join_budget:
                raise LatticeBudgetError(f"{G.name}: more than {join_budget} joins")
            j = G.closure(gens + (x,), seed=h)
            if j not in found:
                found[j] = gens + (x,)
                queue.append(j)
    logger.debug("[Oracle] %s: %d joins", G.name, joins)
    return SubgroupLattice.from_subgroups(G.name, found)


def is_normal(G: PermGroup, bits: int, conjugators: list[int] | None = None) -> bool:
    conj = G.generator_indices if conjugators is None else conjugators
    return all(bits >> G.conjugate(h, s) & 1 for s in conj for h in _members(bits))


def normal_closure(G: PermGroup, gens: list[int], conjugators: list[int] | None = None) -> tuple[int, list[int]]:
    """Smallest subgroup containing `gens` and normalized by `conjugators` (default: all of G)."""
    conj = G.generator_indices if conjugators is None else conjugators
    gens = list(dict.fromkeys(gens))
    bits = G.closure(gens)
    while True:
        extra = [c for s in gens for t in conj if not bits >> (c := G.conjugate(s, t)) & 1]
        if not extra:
            return bits, gens
        gens.extend(dict.fromkeys(extra))
        bits = G.closure(gens, seed=bits)


def derived_subgroup(G: PermGroup, gens: list[int]) -> tuple[int, list[int]]:
    """[H, H] for H = <gens>, with a generating list."""
    commutators = [G.commutator(a, b) for a, b in itertools.combinations(gens, 2)]
    return normal_closure(G, [c for c in commutators if c != 0], gens)


def is_soluble_subgroup(G: PermGroup, gens: list[int]) -> bool:
    bits = G.closure(gens)
    while bits != 1:
        nxt, gens = derived_subgroup(G, gens)
        if nxt == bits:
            return False
        bits = nxt
    return True


def core(G: PermGroup, bits: int) -> int:
    """Intersection of all conjugates of a subgroup."""
    seen = {bits}
    queue = [bits]
    result = bits
    while queue:
        h = queue.pop()
        for s in G.generator_indices:
            k = 0
            for x in _members(h):
                k |= 1 << G.conjugate(x, s)
            if k not in seen:
                seen.add(k)
                result &= k
                queue.append(k)
    return result


def quotient_group(G: PermGroup, n_bits: int) -> PermGroup:
    """G/N through the action of G on the cosets of N by right multiplication."""
    if not is_normal(G, n_bits):
        raise NotNormalError(f"Subgroup of order {len(_members(n_bits))} is not normal in {G.name}")
    normal = _members(n_bits)
    label = [-1] * G.order
    reps: list[int] = []
    for x in range(G.order):
        if label[x] < 0:
            for n in normal:
                label[G.mul(n, x)] = len(reps)
            reps.append(x)
    index = len(reps)
    if index > QUOTIENT_DEGREE_CAP:
        raise OracleCapError(f"{G.name}: quotient of index {index} exceeds {QUOTIENT_DEGREE_CAP} points")
    gens = [Perm(tuple(label[G.mul(r, s)] for r in reps)) for s in G.generator_indices]
    return PermGroup(f"{G.name}/N{len(normal)}", gens, index, degree_cap=QUOTIENT_DEGREE_CAP)


# --- Structure ---

def normal_subgroups(G: PermGroup, L: SubgroupLattice) -> list[int]:
    return [i for i, bits in enumerate(L.subgroups) if is_normal(G, bits)]


def chief_series(G: PermGroup, L: SubgroupLattice) -> list[int]:
    """Lattice indices 1 = N_0 < N_1 < ... < N_r = G of one chief series."""
    normals = normal_subgroups(G, L)
    graph = nx.DiGraph()
    graph.add_nodes_from(normals)
    for h, k in covering_pairs([L.subgroups[i] for i in normals]):
        graph.add_edge(normals[h], normals[k])
    if len(normals) == 1:
        return normals
    return list(nx.dag_longest_path(graph))


def _factor_names(order: int) -> list[str]:
    fact = factorize(order).factors
    if len(fact) == 1:
        p, k = fact[0]
        return [f"C({p})"] * k
    for t_order, name in SIMPLE_ORDERS.items():
        k, m = 0, order
        while m % t_order == 0:
            m //= t_order
            k += 1
        if m == 1 and k:
            return [name] * k
    raise InternalInconsistencyError(f"Chief factor of order {order} is not a power of a known simple group")


def structure(G: PermGroup, L: SubgroupLattice) -> OracleReport:
    l, d = chain_extremes(L)
    series = chief_series(G, L)
    factors: list[str] = []
    for below, above in zip(series, series[1:]):
        factors.extend(_factor_names(L.orders[above] // L.orders[below]))
    normals = normal_subgroups(G, L)
    radical = next((i for i in reversed(normals) if is_soluble_subgroup(G, list(L.generators[i]))), 0)
    minimal = [k for h, k in covering_pairs([L.subgroups[i] for i in normals]) if h == 0]
    socle = G.closure([x for k in minimal for x in L.generators[normals[k]]])
    soluble = L.orders[radical] == G.order
    supersoluble = all(
        factorize(L.orders[L.top] // L.orders[h]).omega == 1 for h in L.maximal_subgroups(L.top))
    report = OracleReport(group=G.name, order=G.order, length=l, depth=d, cd=l - d,
                          chief_length=len(series) - 1, soluble=soluble, supersoluble=supersoluble,
                          radical_order=L.orders[radical], socle_order=len(_members(socle)),
                          composition_factors=sorted(factors), subgroup_count=len(L))
    logger.info("[Oracle] %s: l=%d depth=%d chief=%d subgroups=%d", G.name, l, d,
                report.chief_length, len(L))
    return report


def analyse(g: GroupId, order_cap: int = ORDER_CAP,
            join_budget: int = JOIN_BUDGET) -> tuple[PermGroup, SubgroupLattice, OracleReport]:
    G = construct(g, order_cap)
    L = subgroup_lattice(G, join_budget)
    return G, L, structure(G, L)


# --- Verdict ---

def _compare(verdict: Verdict, what: str, engine: ValueOrRange | bool | None, value: int | bool) -> None:
    if engine is None:
        return
    if isinstance(engine, bool):
        bucket = verdict.agreements if engine == value else verdict.mismatches
        bucket.append(f"{what}={value}" if engine == value else f"{what}: engine {engine}, oracle {value}")
    elif engine.is_exact and engine.value == value:
        verdict.agreements.append(f"{what}={value}")
    elif engine.contains(value):
        verdict.containments.append(f"{what}={value} in {engine}")
    else:
        verdict.mismatches.append(f"{what}: engine {engine}, oracle {value}")


def verify_against_engines(g: GroupId, order_cap: int = ORDER_CAP,
                           join_budget: int = JOIN_BUDGET,
                           facts: OracleReport | None = None) -> Verdict:
    """Compare oracle l, depth, cd and chief facts with the length/depth/chains engines."""
    if facts is None:
        _, _, facts = analyse(g, order_cap, join_budget)
    verdict = Verdict(group=catalog.render(g), kind=VerdictKind.AGREE)
    try:
        rep = chains.report(g)
    except (NotCoveredError, UnsupportedFamilyError) as e:
        verdict.kind = VerdictKind.ENGINE_UNCOVERED
        verdict.uncovered.append(str(e))
        return verdict
    _compare(verdict, "length", rep.length, facts.length)
    _compare(verdict, "depth", rep.depth, facts.depth)
    _compare(verdict, "cd", rep.cd, facts.cd)
    _compare(verdict, "chief_length", rep.chief_length, facts.chief_length)
    _compare(verdict, "soluble", rep.soluble, facts.soluble)
    _compare(verdict, "supersoluble", rep.supersoluble, facts.supersoluble)
    if verdict.mismatches:
        verdict.kind = VerdictKind.MISMATCH
        logger.warning("[Oracle] %s disagrees with the engines: %s", verdict.group,
                       "; ".join(verdict.mismatches))
    elif verdict.containments:
        verdict.kind = VerdictKind.CONTAINED
    return verdict

# --- END OF FILE chainforge/oracle.py ---
