import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from feyngraph.graph import chain, modify, spanning_trees
from feyngraph.graphio import CORPUS, corpus_graph
from feyngraph.poly import MultiPoly, parse_poly
from feyngraph.symanzik import (
    Configuration,
    MomentumVector,
    QuadraticSpace,
    first_symanzik,
    graph_psi,
    pencil,
    polarize,
    second_symanzik,
    symbolic_matrix,
)


def conf(name):
    return Configuration.from_graph(corpus_graph(name))


def test_bubble_pencil_is_unit():
    p = pencil(conf("bubble"))
    assert [[[int(x) for x in r] for r in m] for m in p.matrices] == [[[1]], [[1]]]


def test_triangle_pencil_is_unit():
    p = pencil(conf("triangle"))
    assert all([[int(x) for x in r] for r in m] == [[1]] for m in p.matrices)


def test_wheel3_pencil_rank():
    import numpy as np

    c = conf("wheel3")
    mats = [np.array(m, dtype=float) for m in pencil(c).matrices]
    assert len(mats) == 6 and all(np.linalg.matrix_rank(m) == 1 for m in mats)
    assert np.linalg.matrix_rank(sum(mats)) == 3


@pytest.mark.parametrize("name,text", [("bubble", "A1 + A2"), ("triangle", "A1 + A2 + A3")])
def test_small_psi(name, text):
    c = conf(name)
    assert first_symanzik(c) == parse_poly(text, c.variables)


def test_tree_psi_is_one():
    c = Configuration.from_graph(chain(4))
    assert first_symanzik(c) == MultiPoly.constant(1, c.variables)


def test_methods_agree(corpus_name):
    c = conf(corpus_name)
    assert first_symanzik(c, "determinant") == first_symanzik(c, "spanning_tree")


def test_psi_is_homogeneous_of_degree_genus(corpus_name):
    c = conf(corpus_name)
    assert first_symanzik(c).is_homogeneous(c.genus)


def test_psi_terms_are_spanning_tree_complements(corpus_name):
    g = corpus_graph(corpus_name)
    psi = graph_psi(g)
    comps = {tuple(0 if e in t else 1 for e in g.edges) for t in spanning_trees(g)}
    assert set(psi.terms) == comps and all(v == 1 for v in psi.terms.values())


def test_basis_change_invariance(wheel3):
    c = Configuration.from_graph(wheel3)
    u = [[1, 1, 0], [0, 1, 0], [0, 2, 1]]  # unimodular
    assert first_symanzik(c.transformed(u)) == first_symanzik(c)


def test_bubble_phi():
    c = conf("bubble")
    w = MomentumVector.scalar({1: 3, 2: -3})
    assert second_symanzik(c, w) == parse_poly("9*A1*A2", c.variables)


def test_phi_zero_momentum(corpus_name):
    g = corpus_graph(corpus_name)
    if not g.is_connected():
        pytest.skip("disconnected")
    c = Configuration.from_graph(g)
    w = MomentumVector.scalar({})
    assert second_symanzik(c, w).is_zero()


def test_chain_phi_matches_partial_sums():
    # tree: phi = sum_e A_e q_e^2 with q_e the routed momentum
    c = Configuration.from_graph(chain(4))
    w = MomentumVector.scalar({1: 2, 4: -2})
    assert second_symanzik(c, w) == parse_poly("4*A1 + 4*A2 + 4*A3", c.variables)


def test_phi_methods_agree_scalar(corpus_name):
    c = conf(corpus_name)
    verts = corpus_graph(corpus_name).vertices
    w = MomentumVector.scalar({verts[0]: Fraction(3, 2), verts[-1]: Fraction(-3, 2)})
    assert second_symanzik(c, w, "enlarged_config") == second_symanzik(c, w, "bordered_determinant")


def test_phi_degree(corpus_name):
    c = conf(corpus_name)
    verts = corpus_graph(corpus_name).vertices
    w = MomentumVector.scalar({verts[0]: 1, verts[-1]: -1})
    assert second_symanzik(c, w).is_homogeneous(c.genus + 1)


def test_phi_tree_independent(triangle):
    c = Configuration.from_graph(triangle)
    w = MomentumVector({1: (1, 2), 2: (0, -1), 3: (-1, -1)}, QuadraticSpace.minkowski(2))
    results = {second_symanzik(c, w, tree=sorted(t)) for t in spanning_trees(triangle)}
    assert len(results) == 1


def test_polarize_examples():
    c = conf("bubble")
    w = MomentumVector.scalar({1: 1, 2: -1})
    zero = MomentumVector.scalar({})
    assert polarize(c, w, zero).is_zero()
    assert polarize(c, w, w) == second_symanzik(c, w) * 2
    assert polarize(c, w, w) == parse_poly("2*A1*A2", c.variables)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.integers(-4, 4), st.integers(-4, 4), st.integers(1, 5))
def test_phi_is_quadratic_in_momenta(name, p, q, t):
    g = corpus_graph(name)
    c = Configuration.from_graph(g)
    v = g.vertices
    w = MomentumVector.scalar({v[0]: p, v[-1]: -p})
    w2 = MomentumVector.scalar({v[0]: q, v[1]: -q})
    assert second_symanzik(c, w.scaled(t)) == second_symanzik(c, w) * (t * t)
    assert polarize(c, w, w2) == polarize(c, w2, w)


def test_momentum_must_sum_to_zero():
    with pytest.raises(ValueError):
        MomentumVector.scalar({1: 1, 2: 1})


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(CORPUS)), st.data())
def test_deletion_contraction_random_edge(name, data):
    g = corpus_graph(name)
    e = data.draw(st.sampled_from(list(g.edges)))
    psi = graph_psi(g)
    var = g.edge_names[e]
    if g.is_tadpole(e):
        assert psi.subs(var, 0).is_zero()
        return
    if g.is_bridge(e):
        assert psi.diff(var).is_zero()
    else:
        assert psi.diff(var) == graph_psi(modify(g, e, "delete"))
    assert psi.subs(var, 0) == graph_psi(modify(g, e, "contract"))


def test_symbolic_matrix_det_is_psi(wheel4):
    from feyngraph.poly import det

    c = Configuration.from_graph(wheel4)
    assert det(symbolic_matrix(c), c.variables) == first_symanzik(c, "spanning_tree")
