# --- START OF FILE chainforge/lattice.py ---

import heapq
import json
import logging
from dataclasses import dataclass, field

import networkx as nx

logger = logging.getLogger(__name__)

# Every covering step costs one; the shortest chain is the depth, the longest the length.
COST_STEP = 1


def _popcount(bits: int) -> int:
    return bin(bits).count("1")


@dataclass
class SubgroupLattice:
    """Subgroups of one group as element bitsets, with the covering relation H < K (H maximal in K).

    Subgroups are sorted by (order, bitset), so index 0 is the trivial group
    and the last index is the whole group.
    """
    group: str
    subgroups: list[int]
    orders: list[int]
    generators: list[tuple[int, ...]]
    maximal_in: list[tuple[int, int]] = field(default_factory=list)   # (H, K)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return len(self.subgroups) - 1

    def __len__(self) -> int:
        return len(self.subgroups)

    @classmethod
    def from_subgroups(cls, group: str, found: dict[int, tuple[int, ...]]) -> "SubgroupLattice":
        ordered = sorted(found, key=lambda b: (_popcount(b), b))
        lattice = cls(group, ordered, [_popcount(b) for b in ordered], [found[b] for b in ordered])
        lattice.maximal_in = covering_pairs(ordered)
        logger.info("[Lattice] %s: %d subgroups, %d covering edges", group, len(ordered),
                    len(lattice.maximal_in))
        return lattice

    def index_of(self, bits: int) -> int:
        try:
            return self.subgroups.index(bits)
        except ValueError:
            raise KeyError(f"{bits:#x} is not a subgroup of {self.group}") from None

    def maximal_subgroups(self, k: int) -> list[int]:
        return [h for h, kk in self.maximal_in if kk == k]

    def graph(self) -> nx.DiGraph:
        """Covering DAG with edges pointing down, from K to each maximal subgroup H."""
        g = nx.DiGraph()
        for i, order in enumerate(self.orders):
            g.add_node(i, order=order)
        for h, k in self.maximal_in:
            g.add_edge(k, h, weight=COST_STEP, index=self.orders[k] // self.orders[h])
        return g


def covering_pairs(subgroups: list[int]) -> list[tuple[int, int]]:
    """(H, K) index pairs with H maximal in K, for bitsets sorted by size."""
    pairs = []
    for k, big in enumerate(subgroups):
        below = [h for h in range(k) if subgroups[h] != big and subgroups[h] & big == subgroups[h]]
        maximal: list[int] = []
        for h in sorted(below, key=lambda i: -_popcount(subgroups[i])):
            if not any(subgroups[h] & subgroups[m] == subgroups[h] for m in maximal):
                maximal.append(h)
        pairs.extend((h, k) for h in sorted(maximal))
    return pairs


# --- Chain search ---

def dijkstra_precompute(lattice: SubgroupLattice, start: int) -> tuple[dict[int, int], dict[int, int]]:
    """Fewest covering steps from `start` down to every subgroup below it."""
    children: dict[int, list[int]] = {}
    for h, k in lattice.maximal_in:
        children.setdefault(k, []).append(h)
    distance = {start: 0}
    predecessor: dict[int, int] = {}
    pq = [(0, start)]
    while pq:
        d, current = heapq.heappop(pq)
        if d > distance.get(current, d):
            continue
        for nxt in children.get(current, ()):
            new_distance = d + COST_STEP
            if new_distance < distance.get(nxt, new_distance + 1):
                distance[nxt] = new_distance
                predecessor[nxt] = current
                heapq.heappush(pq, (new_distance, nxt))
    return distance, predecessor


def reconstruct_path(predecessor: dict[int, int], start: int, end: int) -> list[int] | None:
    path = [end]
    current = end
    steps = 0
    while current != start:
        if current not in predecessor or steps > len(predecessor):
            return None
        current = predecessor[current]
        path.append(current)
        steps += 1
    return path[::-1]


def shortest_chain(lattice: SubgroupLattice) -> list[int]:
    """An unrefinable chain G = G_0 > G_1 > ... > 1 of minimal length, as subgroup indices."""
    _, predecessor = dijkstra_precompute(lattice, lattice.top)
    chain = reconstruct_path(predecessor, lattice.top, lattice.bottom)
    if chain is None:
        raise ValueError(f"No covering chain from {lattice.group} to 1")
    return chain


def longest_chain(lattice: SubgroupLattice) -> list[int]:
    if len(lattice) == 1:
        return [0]
    return list(nx.dag_longest_path(lattice.graph(), weight="weight"))


def chain_extremes(lattice: SubgroupLattice) -> tuple[int, int]:
    """(l, depth): the longest and shortest unrefinable chain lengths."""
    return len(longest_chain(lattice)) - 1, len(shortest_chain(lattice)) - 1


# --- Export ---

def to_json(lattice: SubgroupLattice) -> dict:
    data = nx.node_link_data(lattice.graph())
    data["group"] = lattice.group
    return data


def to_dot(lattice: SubgroupLattice) -> str:
    lines = [f'digraph "{lattice.group}" {{', "  rankdir=TB;"]
    for i, order in enumerate(lattice.orders):
        lines.append(f'  {i} [label="{order}"];')
    for h, k in lattice.maximal_in:
        lines.append(f"  {k} -> {h};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_lattice(lattice: SubgroupLattice, file_path: str) -> str:
    """Write JSON (default) or DOT when the path ends in .dot / .gv."""
    if file_path.lower().endswith((".dot", ".gv")):
        text = to_dot(lattice)
    else:
        text = json.dumps(to_json(lattice), indent=2)
    with open(file_path, "w", encoding="utf-8") as f:
        f.write(text)
    logger.info("[Lattice] Exported %s to %s", lattice.group, file_path)
    return file_path

# --- END OF FILE chainforge/lattice.py ---
