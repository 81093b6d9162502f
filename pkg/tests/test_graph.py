import numpy as np
import pytest

from feyngraph.graph import (
    GraphError,
    build_graph,
    chain,
    cycle_basis,
    is_spanning_tree,
    laplacian,
    modify,
    spanning_trees,
    tree_path,
)
from feyngraph.graphio import corpus_graph
from feyngraph.verify import matrix_tree_count


def test_bubble_construction():
    g = build_graph([(1, 2), (1, 2)])
    assert (g.n_vertices, g.n_edges) == (2, 2)
    assert g.loop_number == 1


def test_tadpole_boundary_column_is_zero():
    g = build_graph([(1, 1)])
    assert g.is_tadpole(0)
    assert np.all(g.boundary_matrix()[:, 0] == 0)


def test_wheel3_sizes(wheel3):
    assert (wheel3.n_vertices, wheel3.n_edges, wheel3.loop_number) == (4, 6, 3)


def test_empty_graph_rejected():
    with pytest.raises(GraphError):
        build_graph([])


def test_half_edges_and_orientation(bubble):
    assert bubble.orientation[1] == (2, 3)
    assert bubble.endpoints(1) == (1, 2)
    assert len(bubble.half_edges) == 4


def test_bubble_cycle_basis(bubble):
    cb = cycle_basis(bubble)
    assert cb.genus == 1
    row = [int(x) for x in cb.rows[0]]
    assert row in ([1, -1], [-1, 1])


@pytest.mark.parametrize("n", [2, 3, 6])
def test_chain_has_empty_basis(n):
    assert cycle_basis(chain(n)).genus == 0


def test_wheel3_basis_spans_kernel(wheel3):
    cb = cycle_basis(wheel3)
    B = np.array([[float(x) for x in r] for r in cb.rows])
    assert B.shape == (3, 6)
    assert np.linalg.matrix_rank(B) == 3
    assert np.allclose(wheel3.boundary_matrix() @ B.T, 0)


def test_corpus_cycle_rows_are_cycles(corpus_name):
    g = corpus_graph(corpus_name)
    cb = cycle_basis(g)
    assert cb.genus == g.loop_number
    if cb.genus:
        B = np.array([[float(x) for x in r] for r in cb.rows])
        assert np.allclose(g.boundary_matrix() @ B.T, 0)


def test_bubble_spanning_trees(bubble):
    assert sorted(map(sorted, spanning_trees(bubble))) == [[0], [1]]


def test_chain_has_one_spanning_tree():
    g = chain(5)
    assert spanning_trees(g) == [frozenset(g.edges)]


def test_disconnected_spanning_trees_error():
    g = build_graph([(1, 2), (3, 4)])
    with pytest.raises(GraphError):
        spanning_trees(g)


def test_spanning_tree_count_matches_matrix_tree(corpus_name):
    g = corpus_graph(corpus_name)
    assert len(spanning_trees(g)) == matrix_tree_count(g)
    assert all(is_spanning_tree(g, t) for t in spanning_trees(g))


def test_delete_and_contract_bubble(bubble):
    cut = modify(bubble, 1, "delete")
    assert (cut.n_vertices, cut.n_edges, cut.loop_number) == (2, 1, 0)
    shrunk = modify(bubble, 1, "contract")
    assert (shrunk.n_vertices, shrunk.n_edges, shrunk.loop_number) == (1, 1, 1)
    assert shrunk.is_tadpole(0)


def test_wheel3_contract_spoke(wheel3):
    spoke = wheel3.edge_list().index((1, 4))
    h = modify(wheel3, spoke, "contract")
    assert (h.n_edges, h.loop_number) == (5, 3)
    pairs = [tuple(sorted(map(str, e))) for e in h.edge_list()]
    assert len(set(pairs)) < len(pairs)  # a doubled edge appears


def test_contract_tadpole_removes_edge():
    g = build_graph([(1, 1), (1, 2)])
    h = modify(g, 0, "contract")
    assert (h.n_vertices, h.n_edges, h.loop_number) == (2, 1, 0)
    assert h.edge_names == ("A2",)


def test_tree_path_and_bridges(wheel3):
    g = chain(4)
    assert all(g.is_bridge(e) for e in g.edges)
    assert not any(wheel3.is_bridge(e) for e in wheel3.edges)
    path = tree_path(g, list(g.edges), 1, 4)
    assert [e for e, _ in path] == [0, 1, 2]


def test_laplacian_rows_sum_to_zero(wheel4):
    lap = laplacian(wheel4)
    assert all(sum(r) == 0 for r in lap)
