import json

import pytest

from lattice import (SubgroupLattice, chain_extremes, covering_pairs, dijkstra_precompute, export_lattice,
                     longest_chain, reconstruct_path, shortest_chain, to_dot, to_json)


@pytest.fixture
def uneven_lattice():
    """A poset with a 3-step and a 2-step route from the top to the bottom.

    Sorted, the bitsets are 1, 0b11, 0b10001, 0b111, 0b11111 (indices 0..4).
    """
    found = {0b1: (), 0b11: (1,), 0b111: (1, 2), 0b10001: (4,), 0b11111: (1, 2, 4)}
    return SubgroupLattice.from_subgroups("toy", found)


def test_from_subgroups_sorts_by_size(uneven_lattice):
    assert uneven_lattice.subgroups == [0b1, 0b11, 0b10001, 0b111, 0b11111]
    assert uneven_lattice.orders == [1, 2, 2, 3, 5]
    assert uneven_lattice.bottom == 0
    assert uneven_lattice.top == 4
    assert len(uneven_lattice) == 5

def test_covering_pairs(uneven_lattice):
    assert uneven_lattice.maximal_in == [(0, 1), (0, 2), (1, 3), (2, 4), (3, 4)]
    assert sorted(uneven_lattice.maximal_subgroups(4)) == [2, 3]

def test_covering_pairs_chain():
    assert covering_pairs([0b1, 0b101, 0b1111]) == [(0, 1), (1, 2)]

def test_index_of(uneven_lattice):
    assert uneven_lattice.index_of(0b111) == 3
    with pytest.raises(KeyError):
        uneven_lattice.index_of(0b1010)

def test_graph_points_down(uneven_lattice):
    g = uneven_lattice.graph()
    assert g.has_edge(4, 2)
    assert not g.has_edge(2, 4)
    assert g.nodes[4]["order"] == 5


# --- Chain search ---

def test_dijkstra_distances(uneven_lattice):
    distance, predecessor = dijkstra_precompute(uneven_lattice, uneven_lattice.top)
    assert distance[0] == 2
    assert distance[1] == 2
    assert predecessor[0] == 2

def test_reconstruct_path(uneven_lattice):
    _, predecessor = dijkstra_precompute(uneven_lattice, 4)
    assert reconstruct_path(predecessor, 4, 0) == [4, 2, 0]
    assert reconstruct_path(predecessor, 4, 4) == [4]
    _, from_three = dijkstra_precompute(uneven_lattice, 3)
    assert reconstruct_path(from_three, 3, 2) is None

def test_shortest_and_longest_chains(uneven_lattice):
    assert shortest_chain(uneven_lattice) == [4, 2, 0]
    assert longest_chain(uneven_lattice) == [4, 3, 1, 0]
    assert chain_extremes(uneven_lattice) == (3, 2)

def test_trivial_lattice():
    lattice = SubgroupLattice.from_subgroups("1", {1: ()})
    assert chain_extremes(lattice) == (0, 0)

def test_shortest_chain_without_route():
    lattice = SubgroupLattice("broken", [0b1, 0b11], [1, 2], [(), (1,)], maximal_in=[])
    with pytest.raises(ValueError):
        shortest_chain(lattice)


# --- Export ---

def test_to_json(uneven_lattice):
    data = to_json(uneven_lattice)
    assert data["group"] == "toy"
    assert len(data["nodes"]) == 5

def test_to_dot(uneven_lattice):
    text = to_dot(uneven_lattice)
    assert text.startswith('digraph "toy" {')
    assert "  4 -> 2;" in text
    assert '  3 [label="3"];' in text

def test_export_lattice_by_extension(uneven_lattice, tmp_path):
    dot_path = export_lattice(uneven_lattice, str(tmp_path / "toy.dot"))
    assert open(dot_path, encoding="utf-8").read().startswith("digraph")
    json_path = export_lattice(uneven_lattice, str(tmp_path / "toy.json"))
    with open(json_path, encoding="utf-8") as f:
        assert json.load(f)["group"] == "toy"
