import numpy as np
import pytest

from feyngraph.amplitude import Kinematics
from feyngraph.graph import build_graph
from feyngraph.graphio import corpus_graph
from feyngraph.landau import (
    banana_kinematics,
    banana_threshold,
    bisect_threshold,
    connected_cut_checks,
    cut_keeps_connected,
    find_physical_pinch,
    hessian_check,
    landau_residual,
)
from feyngraph.symanzik import QuadraticSpace

E1 = QuadraticSpace.euclidean(1)


def bubble_kin(a, masses=(1, 1), space=E1):
    return Kinematics.build(space, {1: (a,), 2: (-a,)}, masses)


def test_symmetric_pinch_residual(bubble):
    r = landau_residual(bubble, bubble_kin(2), [0.5, 0.5], [1.0])
    assert np.allclose(r, 0)


def test_off_shell_residual_nonzero(bubble):
    r = landau_residual(bubble, bubble_kin(2), [0.5, 0.5], [0.3])
    assert np.max(np.abs(r[:2])) > 0.1


def test_zero_c_rejected(bubble):
    with pytest.raises(ValueError):
        landau_residual(bubble, bubble_kin(2), [0, 0], [1.0])


def test_residual_scaling(bubble):
    kin = bubble_kin(2.5)
    r1 = landau_residual(bubble, kin, [0.3, 0.7], [0.4])
    r2 = landau_residual(bubble, kin, [0.9, 2.1], [0.4])
    assert np.allclose(r1[:2], r2[:2]) and np.allclose(3 * r1[2:], r2[2:])


def test_bubble_pinch_at_threshold(bubble):
    pinches = find_physical_pinch(bubble, bubble_kin(2))
    assert len(pinches) == 1
    p = pinches[0]
    assert np.allclose(p.c, [0.5, 0.5], atol=1e-8) and p.c.sum() == pytest.approx(1.0)


def test_bubble_no_pinch_off_threshold(bubble):
    assert find_physical_pinch(bubble, bubble_kin(3)) == []


@pytest.mark.parametrize("a", [1, 2])
def test_single_edge_never_pinches(a):
    # a = m puts the propagator on shell: a pole, not a pinch
    g = build_graph([(1, 2)])
    kin = Kinematics.build(E1, {1: (a,), 2: (-a,)}, [1])
    assert find_physical_pinch(g, kin) == []


@pytest.mark.parametrize(
    "n,masses,values,phys",
    [(2, (1, 1), [0.0, 2.0], 2.0), (2, (1, 2), [1.0, 3.0], 3.0), (3, (1, 1, 1), [1.0, 3.0], 3.0)],
)
def test_banana_threshold_formula(n, masses, values, phys):
    assert banana_threshold(n, masses) == (values, phys)


def test_banana_threshold_rejects_nonpositive_mass():
    with pytest.raises(ValueError):
        banana_threshold(2, (1, 0))


def test_bisection_close_to_sum():
    assert bisect_threshold(2, (1, 1), 1.5, 2.5, tol=1e-10) == pytest.approx(2.0, abs=1e-8)


def test_hessian_negative_definite_bubble():
    g = corpus_graph("bubble")
    kin = banana_kinematics(2, (1, 1), 2.0)
    (p,) = find_physical_pinch(g, kin)
    rep = hessian_check(p, g, kin)
    assert rep.verdict == "negative-definite" and max(rep.eigenvalues) < -1e-10


def test_hessian_preconditions(bubble):
    kin = banana_kinematics(2, (1, 1), 2.0)
    (p,) = find_physical_pinch(bubble, kin)
    with pytest.raises(ValueError):
        hessian_check(p, bubble, bubble_kin(2))
    with pytest.raises(ValueError):
        hessian_check(p, bubble, banana_kinematics(2, (1, 0), 2.0))


def test_cut_keeps_connected(triangle):
    assert cut_keeps_connected(triangle, [0])
    assert not cut_keeps_connected(triangle, [0, 1])


def test_connected_cuts_infeasible():
    g = corpus_graph("triangle")
    kin = Kinematics.build(QuadraticSpace.minkowski(2), {1: (3, 0), 2: (-1, 1), 3: (-2, -1)}, [1, 1, 1])
    checks = connected_cut_checks(g, kin, n_samples=30)
    assert checks and all(c.infeasible for c in checks)
