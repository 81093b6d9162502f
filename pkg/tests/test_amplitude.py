import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from feyngraph import _kernels
from feyngraph.amplitude import (
    Kinematics,
    PoleError,
    amplitude_phi,
    exponential_integrand,
    gaussian_integral,
    integrate_simplex,
    parametric_integrand,
    phi_from_decomposition,
    quotient_metric,
    route_and_decompose,
    schwinger_integrand,
    stick_breaking_rule,
    tree_amplitude,
    tree_chain_amplitude,
)
from feyngraph.graph import chain, spanning_trees
from feyngraph.graphio import corpus_graph
from feyngraph.poly import parse_poly
from feyngraph.symanzik import Configuration, QuadraticSpace, graph_psi, second_symanzik
from feyngraph.verify import random_kinematics

E1 = QuadraticSpace.euclidean(1)


def scalar_kin(g, p, masses=None, sign=-1):
    v = g.vertices
    masses = masses if masses is not None else [0] * g.n_edges
    return Kinematics.build(E1, {v[0]: (p,), v[-1]: (-p,)}, masses, sign)


def test_bubble_massless_phi(bubble):
    phi = amplitude_phi(bubble, scalar_kin(bubble, 2))
    assert phi == parse_poly("4*A1*A2", ("A1", "A2"))


def test_bubble_massive_phi(bubble):
    # psi * (p Gamma p + sign * mu) - (Bp)^T adj(M) (Bp) with psi = A1 + A2
    for sign in (1, -1):
        phi = amplitude_phi(bubble, scalar_kin(bubble, 1, [1, 2], sign))
        expect = parse_poly(f"A1*A2 + {sign}*A1^2 + {5 * sign}*A1*A2 + {4 * sign}*A2^2", ("A1", "A2"))
        assert phi == expect


def test_massless_phi_matches_second_symanzik(corpus_name):
    g = corpus_graph(corpus_name)
    kin = scalar_kin(g, 3)
    c = Configuration.from_graph(g)
    assert amplitude_phi(g, kin) == second_symanzik(c, kin.momenta)


def test_tree_decomposition_has_no_loops():
    g = chain(4)
    d = route_and_decompose(g, scalar_kin(g, 1, [1, 1, 1]))
    assert d.genus == 0
    assert graph_psi(g).total_degree() == 0


def test_zero_momentum_leaves_mass_term(triangle):
    kin = Kinematics.build(E1, {}, [1, 1, 1])
    phi = amplitude_phi(triangle, kin)
    psi = graph_psi(triangle)
    assert phi == psi * parse_poly("-1*A1 + -1*A2 + -1*A3", psi.variables)


def test_routing_independence_small(triangle):
    kin = Kinematics.build(QuadraticSpace.euclidean(2), {1: (1, 0), 2: (2, 3), 3: (-3, -3)}, [1, 2, 3])
    phis = {amplitude_phi(triangle, kin, sorted(t)) for t in spanning_trees(triangle)}
    assert len(phis) == 1


@pytest.mark.parametrize("a,expected", [((1, 1), Fraction(1, 2)), ((1, 3), Fraction(3, 4))])
def test_bubble_quotient_metric(bubble, a, expected):
    assert quotient_metric(bubble, a, scalar_kin(bubble, 1)) == expected


def test_quotient_metric_zero_momentum(wheel3):
    assert quotient_metric(wheel3, [1] * 6, Kinematics.build(E1, {}, [0] * 6)) == 0


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["bubble", "triangle", "double_bubble", "wheel3", "chain4"]), st.integers(0, 10**6))
def test_quotient_metric_identity(name, seed):
    g = corpus_graph(name)
    rng = random.Random(seed)
    kin = random_kinematics(g, rng)
    a = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in g.edges]
    psi = graph_psi(g)
    assert quotient_metric(g, a, kin) * psi.evaluate(a) == amplitude_phi(g, kin).evaluate(a)


def test_propagator_sum_equals_quadric(triangle):
    kin = Kinematics.build(QuadraticSpace.euclidean(2), {1: (1, 0), 3: (-1, 0)}, [1, 1, 2])
    d = route_and_decompose(triangle, kin)
    rng = random.Random(1)
    for _ in range(5):
        a = [Fraction(rng.randint(1, 5)) for _ in range(3)]
        x = [[Fraction(rng.randint(-3, 3)) for _ in range(2)]]
        assert d.propagator_sum(a, x, kin.masses) == d.quadric(a, x)


# -- integrand metadata


def test_bubble_exponents():
    g = corpus_graph("bubble")
    it = parametric_integrand(g, 2, scalar_kin(g, 1, [1, 1], 1))
    assert it.exponents() == {"psi": "0", "phi": "1"} and not it.log_divergent
    it4 = parametric_integrand(g, 4, scalar_kin(g, 1, [1, 1], 1))
    assert it4.log_divergent and it4.phi.total_degree() == 0
    assert math.isinf(it4.prefactor())


def test_wheel3_d4_log_divergent(wheel3):
    it = parametric_integrand(wheel3, 4, scalar_kin(wheel3, 1, [1] * 6, 1))
    assert it.log_divergent and it.exponents()["psi"] == "-2"


def test_log_divergent_ignores_kinematics(wheel3):
    a = parametric_integrand(wheel3, 4, scalar_kin(wheel3, 1, [1] * 6, 1))
    b = parametric_integrand(wheel3, 4, scalar_kin(wheel3, 5, [3] * 6, 1))
    pts = np.random.default_rng(0).dirichlet(np.ones(6), 10)
    assert np.array_equal(a(pts), b(pts))


def test_exponential_integrand_constant(bubble):
    ex = exponential_integrand(bubble, 2, scalar_kin(bubble, 1))
    assert ex.constant == pytest.approx(1 / (1j * (4 * math.pi) ** 2))
    vals = ex(np.array([[0.5, 0.5]]))
    assert abs(vals[0]) == pytest.approx(1.0)


# -- simplex integration


def test_constant_integrand_has_unit_mean():
    est = integrate_simplex(lambda a: np.ones(a.shape[0]), n_samples=5000, n_vars=4)
    assert est.value == 1.0 and est.std_error == 0.0


def test_n_samples_must_be_positive():
    with pytest.raises(ValueError):
        integrate_simplex(lambda a: a[:, 0], n_samples=0, n_vars=2)


def test_dirichlet_means():
    est = integrate_simplex(lambda a: a[:, 1], n_samples=200_000, n_vars=3, seed=4)
    assert abs(est.value - 1 / 3) < 4 * est.std_error


def bubble_oracle():
    # independent 1D oracle: mean over t in [0,1] of 1/phi(t, 1-t), m = p = 1, Euclidean
    return integrate.quad(lambda t: 1 / (t * (1 - t) + 1), 0, 1, epsabs=1e-14, epsrel=1e-14)[0]


BUBBLE_ORACLE = 0.8608178819280082  # frozen from scipy.integrate.quad


def test_bubble_oracle_frozen():
    assert bubble_oracle() == pytest.approx(BUBBLE_ORACLE, rel=1e-13)


def bubble_integrand():
    g = corpus_graph("bubble")
    return parametric_integrand(g, 2, scalar_kin(g, 1, [1, 1], 1))


@pytest.mark.parametrize("method", ["plain_mc", "stratified"])
def test_bubble_mc(method):
    est = integrate_simplex(bubble_integrand(), method, 100_000, seed=2)
    assert abs(est.value - BUBBLE_ORACLE) < 4 * est.std_error
    assert est.converged


def test_bubble_quadrature():
    est = integrate_simplex(bubble_integrand(), "quadrature", 64)
    assert est.value == pytest.approx(BUBBLE_ORACLE, rel=1e-10)


def test_stratified_reduces_error():
    plain = integrate_simplex(bubble_integrand(), "plain_mc", 100_000, seed=1)
    strat = integrate_simplex(bubble_integrand(), "stratified", 100_000, seed=1)
    assert strat.std_error < plain.std_error


def test_seeded_determinism_across_threads():
    it = bubble_integrand()
    a = integrate_simplex(it, "plain_mc", 300_000, seed=9, workers=1)
    b = integrate_simplex(it, "plain_mc", 300_000, seed=9, workers=4)
    assert (a.value, a.std_error) == (b.value, b.std_error)
    c = integrate_simplex(it, "plain_mc", 300_000, seed=10, workers=1)
    assert c.value != a.value


def test_divergent_integrand_flagged():
    # 1/a_1 has infinite mean on the simplex
    est = integrate_simplex(lambda a: 1 / a[:, 0] ** 1.5, n_samples=400_000, n_vars=2, seed=0)
    assert not est.converged


def test_wheel3_period_seed_stable(wheel3):
    it = parametric_integrand(wheel3, 4, scalar_kin(wheel3, 1, [1] * 6, 1))
    a = integrate_simplex(it, "plain_mc", 200_000, seed=1)
    b = integrate_simplex(it, "plain_mc", 200_000, seed=2)
    assert abs(a.value - b.value) < 5 * math.hypot(a.std_error, b.std_error)
    # finite mean, infinite variance: the heavy tail is reported
    assert not a.converged and not b.converged


def test_stick_breaking_weights():
    for n in (2, 3, 4):
        pts, w = stick_breaking_rule(n, 6)
        assert math.fsum(w) == pytest.approx(1.0, rel=1e-13)
        assert np.allclose(pts.sum(axis=1), 1.0)


# -- kernels


@pytest.mark.skipif("numba" not in _kernels.BACKENDS, reason="numba unavailable")
@pytest.mark.parametrize("name", ["bubble", "wheel3", "banana4"])
def test_backends_agree(name):
    g = corpus_graph(name)
    it = parametric_integrand(g, 2, scalar_kin(g, 1, [1] * g.n_edges, 1))
    pts = np.random.default_rng(3).dirichlet(np.ones(g.n_edges), 500)
    before = _kernels.backend()
    try:
        out = {}
        for b in ("numpy", "numba"):
            _kernels.set_backend(b)
            out[b] = it(pts)
            est = integrate_simplex(it, "plain_mc", 20_000, seed=5)
            out[b + "_est"] = est.value
        assert np.allclose(out["numpy"], out["numba"], rtol=1e-13, atol=0)
        assert out["numpy_est"] == pytest.approx(out["numba_est"], rel=1e-12)
    finally:
        _kernels.set_backend(before)


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.set_backend("fortran")


# -- Schwinger and Gaussian identities


@pytest.mark.parametrize("f", [(1.0, 2.0), (0.5, 3.0), (1.0, 2.0, 3.0), (0.7, 1.3, 2.9)])
def test_schwinger_identity(f):
    est = integrate_simplex(schwinger_integrand(f), "quadrature", 40 ** (len(f) - 1))
    assert est.value == pytest.approx(1 / math.prod(f), rel=1e-6)


@pytest.mark.parametrize("coeffs,offset,power", [((2.0,), 1.5, 1), ((1.0, 3.0), 0.5, 2), ((0.5,), 2.0, 3)])
def test_gaussian_identity(coeffs, offset, power):
    if len(coeffs) == 1:
        num = integrate.quad(lambda u: 1 / (coeffs[0] * u * u + offset) ** power, -np.inf, np.inf)[0]
    else:
        num = integrate.dblquad(
            lambda y, x: 1 / (coeffs[0] * x * x + coeffs[1] * y * y + offset) ** power,
            -np.inf, np.inf, -np.inf, np.inf, epsabs=1e-13, epsrel=1e-12,
        )[0]
    assert gaussian_integral(coeffs, offset, power) == pytest.approx(num, rel=1e-7)


def test_gaussian_divergent_rejected():
    with pytest.raises(ValueError):
        gaussian_integral((1.0, 1.0), 1.0, 1)


# -- trees


def test_tree_chain_examples():
    k2 = Kinematics.build(E1, {1: (2,), 2: (-2,)}, [1])
    assert tree_chain_amplitude(2, k2) == Fraction(1, 3)
    k3 = Kinematics.build(E1, {1: (1,), 2: (1,), 3: (-2,)}, [0, 0])
    assert tree_chain_amplitude(3, k3) == Fraction(1, 4)


def test_tree_chain_pole():
    k = Kinematics.build(E1, {1: (1,), 2: (-1,)}, [1])
    with pytest.raises(PoleError):
        tree_chain_amplitude(2, k)


def test_tree_amplitude_requires_tree(bubble):
    from feyngraph.graph import GraphError

    with pytest.raises(GraphError):
        tree_amplitude(bubble, scalar_kin(bubble, 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 6), st.integers(0, 10**6))
def test_chain_closed_form_matches_fibre(n, seed):
    rng = random.Random(seed)
    space = QuadraticSpace.minkowski(2)
    mom = {v: (Fraction(rng.randint(-5, 5), 3), Fraction(rng.randint(-5, 5), 2)) for v in range(1, n)}
    mom[n] = tuple(-sum(p[k] for p in mom.values()) for k in range(2))
    kin = Kinematics.build(space, mom, [Fraction(rng.randint(1, 7), 5) for _ in range(n - 1)])
    try:
        closed = tree_chain_amplitude(n, kin)
    except PoleError:
        with pytest.raises(PoleError):
            tree_amplitude(chain(n), kin)
        return
    assert tree_amplitude(chain(n), kin) == closed
