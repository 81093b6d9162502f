"""Singular points of the universal quadric sum_e c_e f_e with every edge on shell.

Propagators use the physics sign, ``f_e = Q(q_e) - m_e^2``, with edge
momenta ``q_e = sum_i x_i c_ie + r_e`` (loop coordinates x, tree-routed
external part r).  A pinch is a point (c, x) with all f_e = 0 and
``sum_e c_e grad_x f_e = 0``; it is physical when every c_e > 0.
"""

from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import least_squares, minimize

from .amplitude import Kinematics
from .graph import Graph, build_graph, cycle_basis
from .symanzik import MomentumVector, QuadraticSpace, tree_routing

log = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
EIG_TOL = 1e-10


@dataclass
class QuadricSystem:
    basis: np.ndarray  # (g, n)
    shift: np.ndarray  # (n, D) tree-routed external momenta
    eta: np.ndarray  # (D,) signature
    m2: np.ndarray  # (n,)

    @property
    def genus(self) -> int:
        return self.basis.shape[0]

    @property
    def n_edges(self) -> int:
        return self.basis.shape[1]

    @property
    def dim(self) -> int:
        return self.eta.shape[0]

    def edge_momenta(self, x: np.ndarray) -> np.ndarray:
        return self.basis.T @ x.reshape(self.genus, self.dim) + self.shift

    def f(self, x: np.ndarray) -> np.ndarray:
        q = self.edge_momenta(x)
        return (q * q) @ self.eta - self.m2

    def gradients(self, x: np.ndarray) -> np.ndarray:
        """Row e: d f_e / d x, flattened over (loop index, component)."""
        q = self.edge_momenta(x) * self.eta
        return 2 * np.einsum("ie,ek->eik", self.basis, q).reshape(self.n_edges, -1)

    def stationary_x(self, c: np.ndarray) -> np.ndarray:
        """x where sum_e c_e f_e is stationary: M x = -sum_e c_e c_e r_e."""
        M = (self.basis * c) @ self.basis.T
        rhs = -(self.basis * c) @ self.shift
        return np.linalg.solve(M, rhs).ravel()


def quadric_system(g: Graph, kin: Kinematics) -> QuadricSystem:
    kin.check_graph(g)
    cb = cycle_basis(g)
    flows = tree_routing(g, cb.tree, kin.momenta)
    return QuadricSystem(
        basis=cb.rows.astype(float).reshape(cb.genus, g.n_edges),
        shift=np.array([[float(v) for v in q] for q in flows]).reshape(g.n_edges, kin.space.dim),
        eta=np.array(kin.space.signature, dtype=float),
        m2=np.array([float(m) ** 2 for m in kin.masses]),
    )


def landau_residual(g: Graph, kin: Kinematics, c: Sequence[float], x: Sequence[float]) -> np.ndarray:
    """(f_e(x))_e followed by sum_e c_e grad f_e(x)."""
    sys_ = quadric_system(g, kin)
    c = np.asarray(c, dtype=float)
    x = np.asarray(x, dtype=float).ravel()
    if c.shape != (sys_.n_edges,):
        raise ValueError("one Feynman parameter per edge required")
    if x.shape != (sys_.genus * sys_.dim,):
        raise ValueError(f"x must have g*D = {sys_.genus * sys_.dim} entries")
    if not np.any(c):
        raise ValueError("c must be projectively nonzero")
    return np.concatenate([sys_.f(x), c @ sys_.gradients(x)])


@dataclass
class PinchPoint:
    c: np.ndarray
    x: np.ndarray
    f_residual: float
    gradient_residual: float
    hessian_signature: tuple[int, int, int] | None = None

    def to_json(self) -> dict:
        return {
            "c": self.c.tolist(),
            "x": self.x.tolist(),
            "f_residual": self.f_residual,
            "gradient_residual": self.gradient_residual,
            "hessian_signature": list(self.hessian_signature) if self.hessian_signature else None,
        }


def _solve_from(sys_: QuadricSystem, c0: np.ndarray, x0: np.ndarray):
    n = sys_.n_edges

    def resid(z):
        c, x = z[:n], z[n:]
        return np.concatenate([sys_.f(x), c @ sys_.gradients(x), [c.sum() - 1.0]])

    def jac(z):
        c, x = z[:n], z[n:]
        G = sys_.gradients(x)
        H = 2 * np.kron((sys_.basis * c) @ sys_.basis.T, np.diag(sys_.eta))
        top = np.hstack([np.zeros((n, n)), G])
        mid = np.hstack([G.T, H])
        bot = np.concatenate([np.ones(n), np.zeros(x.size)])[None, :]
        return np.vstack([top, mid, bot])

    lo = np.concatenate([np.zeros(n), np.full(x0.size, -np.inf)])
    z0 = np.concatenate([c0, x0])
    sol = least_squares(resid, z0, jac=jac, bounds=(lo, np.inf), method="trf", xtol=1e-15, ftol=1e-15, gtol=1e-15, max_nfev=400)
    z = sol.x
    # Gauss-Newton polish without bounds; keep it only if c stays positive
    for _ in range(8):
        J, r = jac(z), resid(z)
        step = np.linalg.lstsq(J, -r, rcond=None)[0]
        trial = z + step
        if np.any(trial[:n] <= 0) or np.linalg.norm(resid(trial)) >= np.linalg.norm(r):
            break
        z = trial
    return z[:n], z[n:], resid(z)


def find_physical_pinch(g: Graph, kin: Kinematics, seed: int = 0, n_starts: int = 20) -> list[PinchPoint]:
    """Physical pinches found by bounded least squares from seeded random starts."""
    if g.n_vertices < 2:
        raise ValueError("need at least two vertices")
    sys_ = quadric_system(g, kin)
    n, nx = sys_.n_edges, sys_.genus * sys_.dim
    if sys_.genus == 0:
        # no loop momenta: nothing to pinch, only poles of the propagators
        return []
    scale = max(1.0, float(np.sqrt(sys_.m2.max(initial=0.0))), float(np.abs(sys_.shift).max(initial=0.0)))
    found: list[PinchPoint] = []
    streams = np.random.SeedSequence(seed).spawn(n_starts)
    for ss in streams:
        rng = np.random.default_rng(ss)
        c0 = rng.dirichlet(np.ones(n))
        x0 = rng.normal(scale=scale, size=nx)
        if nx:
            try:
                x0 = sys_.stationary_x(c0) + 0.1 * x0
            except np.linalg.LinAlgError:
                pass
        c, x, r = _solve_from(sys_, c0, x0)
        fres = float(np.max(np.abs(r[:n]), initial=0.0))
        gres = float(np.max(np.abs(r[n:]), initial=0.0))
        if max(fres, gres) > RESIDUAL_TOL or np.any(c <= 0):
            continue
        point = PinchPoint(c / c.sum(), x, fres, gres)
        if all(np.linalg.norm(np.concatenate([point.c - p.c, point.x - p.x])) > 1e-6 for p in found):
            found.append(point)
    found.sort(key=lambda p: tuple(np.round(np.concatenate([p.c, p.x]), 9)))
    return found


# -- thresholds ---------------------------------------------------------------------


def banana_threshold(n: int, masses: Sequence[float]) -> tuple[list[float], float]:
    """All |sum_i s_i m_i| with s_1 = +1, deduplicated and sorted, plus the physical one."""
    if n < 2:
        raise ValueError("banana needs at least two edges")
    masses = [float(m) for m in masses]
    if len(masses) != n:
        raise ValueError("one mass per edge required")
    if any(m <= 0 for m in masses):
        raise ValueError("masses must be positive")
    vals = set()
    for signs in itertools.product((1, -1), repeat=n - 1):
        vals.add(round(abs(masses[0] + sum(s * m for s, m in zip(signs, masses[1:]))), 12))
    return sorted(vals), sum(masses)


def banana_kinematics(n: int, masses: Sequence[float], s: float, dim: int = 2) -> Kinematics:
    """Banana with timelike external momentum (s, 0, ...) at vertex 1."""
    space = QuadraticSpace.minkowski(dim) if dim > 1 else QuadraticSpace.euclidean(1)
    a = (s,) + (0,) * (dim - 1)
    return Kinematics(MomentumVector({1: a, 2: tuple(-x for x in a)}, space), tuple(masses))


def threshold_indicator(sys_: QuadricSystem) -> tuple[float, np.ndarray]:
    """max over the simplex of the stationary value of sum_e c_e f_e.

    The stationary value is homogeneous of degree one in c and its c-gradient
    is (f_e at the stationary x), so an interior maximum of zero is a
    physical pinch.
    """
    n = sys_.n_edges

    def value(c):
        x = sys_.stationary_x(c)
        return float(c @ sys_.f(x))

    def grad(c):
        return sys_.f(sys_.stationary_x(c))

    best = None
    with warnings.catch_warnings():
        # SLSQP probes slightly outside the box; values are clipped, which is harmless here
        warnings.simplefilter("ignore", RuntimeWarning)
        for c0 in [np.full(n, 1.0 / n)] + [np.eye(n)[i] * 0.8 + 0.2 / n for i in range(n)]:
            res = minimize(
                lambda c: -value(c),
                c0,
                jac=lambda c: -grad(c),
                method="SLSQP",
                bounds=[(1e-12, 1.0)] * n,
                constraints=[{"type": "eq", "fun": lambda c: c.sum() - 1.0, "jac": lambda c: np.ones(n)}],
                options={"ftol": 1e-15, "maxiter": 500},
            )
            if best is None or -res.fun > best[0]:
                best = (-res.fun, res.x)
    return best


def bisect_threshold(n: int, masses: Sequence[float], lo: float, hi: float, tol: float = 1e-12, dim: int = 2) -> float:
    """Locate the sign change of the threshold indicator on [lo, hi] in |a|."""

    def h(s):
        return threshold_indicator(quadric_system(build_graph([(1, 2)] * n), banana_kinematics(n, masses, s, dim)))[0]

    hlo, hhi = h(lo), h(hi)
    if hlo > 0 or hhi < 0:
        raise ValueError(f"no sign change on [{lo}, {hi}] (h = {hlo}, {hhi})")
    for _ in range(200):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if h(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# -- Hessian -------------------------------------------------------------------------


@dataclass
class HessianReport:
    signature: tuple[int, int, int]
    eigenvalues: list[float]
    gradient_rank: int
    verdict: str  # "negative-definite" | "indefinite" | "degenerate"

    def to_json(self) -> dict:
        return {
            "signature": list(self.signature),
            "eigenvalues": self.eigenvalues,
            "gradient_rank": self.gradient_rank,
            "verdict": self.verdict,
        }


def hessian_check(p: PinchPoint, g: Graph, kin: Kinematics) -> HessianReport:
    """Signature of sum_e c_e Hess(f_e) on the common tangent space of the quadrics."""
    if not kin.space.is_minkowski:
        raise ValueError("the Hessian test needs a Minkowski form")
    if any(float(m) <= 0 for m in kin.masses):
        raise ValueError("the Hessian test needs every mass positive")
    sys_ = quadric_system(g, kin)
    G = sys_.gradients(p.x)
    n = sys_.n_edges
    _, sv, vt = np.linalg.svd(G)
    rank = int(np.sum(sv > EIG_TOL * max(1.0, sv.max(initial=0.0))))
    H = 2 * np.kron((sys_.basis * p.c) @ sys_.basis.T, np.diag(sys_.eta))
    null = vt[rank:].T
    if rank != n - 1:
        ev: list[float] = []
        sig = (0, 0, null.shape[1])
        p.hessian_signature = sig
        return HessianReport(sig, ev, rank, "degenerate")
    restricted = null.T @ H @ null
    ev = np.linalg.eigvalsh(restricted)
    sig = (int(np.sum(ev > EIG_TOL)), int(np.sum(ev < -EIG_TOL)), int(np.sum(np.abs(ev) <= EIG_TOL)))
    p.hessian_signature = sig
    if sig[2]:
        verdict = "degenerate"
    elif sig[0] == 0:
        verdict = "negative-definite"
    else:
        verdict = "indefinite"
    return HessianReport(sig, ev.tolist(), rank, verdict)


# -- connected cuts ---------------------------------------------------------------------


def cut_keeps_connected(g: Graph, edges: Sequence[int]) -> bool:
    drop = set(edges)
    rest = [g.endpoints(e) for e in g.edges if e not in drop]
    return build_graph(rest, vertices=g.vertices).is_connected()


def _random_on_shell(eta: np.ndarray, m2: float, rng) -> np.ndarray:
    D = eta.shape[0]
    m = np.sqrt(m2)
    if np.all(eta > 0):
        v = rng.normal(size=D)
        return m * v / np.linalg.norm(v)
    # Minkowski: boosted rest-frame vector, random time orientation
    spatial = rng.normal(size=D - 1) * rng.uniform(0, 2)
    return np.concatenate([[np.sqrt(m2 + spatial @ spatial)], spatial]) * rng.choice([-1.0, 1.0])


@dataclass
class CutCheck:
    edges: tuple[int, ...]
    min_rank: int
    samples: int

    @property
    def infeasible(self) -> bool:
        return self.min_rank == len(self.edges)


def connected_cut_checks(g: Graph, kin: Kinematics, n_samples: int = 100, seed: int = 0) -> list[CutCheck]:
    """For each edge set whose removal keeps g connected, the rank of its gradients at on-shell points.

    Full rank everywhere means no relation sum c_e grad f_e = 0, so no pinch.
    """
    sys_ = quadric_system(g, kin)
    if np.any(sys_.m2 <= 0):
        raise ValueError("on-shell sampling needs positive masses")
    out = []
    rng = np.random.default_rng(seed)
    g_, D = sys_.genus, sys_.dim
    for size in range(1, g.n_edges + 1):
        for S in itertools.combinations(range(g.n_edges), size):
            if not cut_keeps_connected(g, S):
                continue
            A = sys_.basis[:, S].T  # (|S|, g): x -> loop part of q_e
            min_rank = size
            for _ in range(n_samples):
                target = np.array([_random_on_shell(sys_.eta, sys_.m2[e], rng) for e in S])
                rhs = target - sys_.shift[list(S)]
                x = np.linalg.lstsq(A, rhs, rcond=None)[0]
                null = np.linalg.svd(A)[2][np.linalg.matrix_rank(A):]
                if null.size:
                    x = x + null.T @ rng.normal(size=(null.shape[0], D))
                xf = x.ravel()
                if np.max(np.abs(sys_.f(xf)[list(S)])) > 1e-8 * max(1.0, sys_.m2.max()):
                    raise ArithmeticError("failed to place the cut edges on shell")
                rank = np.linalg.matrix_rank(sys_.gradients(xf)[list(S)], tol=1e-9)
                min_rank = min(min_rank, int(rank))
            out.append(CutCheck(S, min_rank, n_samples))
    return out
