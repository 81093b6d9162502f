"""Heights on the Poincare bundle along nilpotent orbits built from graph data.

A point is ``(Omega, W, Z, alpha)`` with Omega in the Siegel upper half
space.  The orbit attached to a graph, crossing vectors ``u`` (routing of
one vertex divisor) and ``v`` (routing of the other) is

    Omega = Omega_inf + sum_e z_e M_e
    W     = W_inf     + sum_e z_e u_e c_e
    Z     = Z_inf     + sum_e z_e v_e c_e
    alpha = alpha_inf - sum_e z_e u_e v_e

With ``z_e = X_e + i Y_e / alpha'`` the rescaled height ``alpha' * h``
tends to ``4 pi (W M^-1 Z - S)`` where ``S = sum Y u v``,
``W = sum Y u c`` and ``Z = sum Y v c``.  That equals
``KAPPA * polarize(Y) / psi(Y)`` with ``KAPPA = -2 pi``, since
``polarize`` is twice the bilinear Symanzik form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .graph import Graph, cycle_basis
from .symanzik import Configuration, MomentumVector, first_symanzik, pencil, polarize, tree_routing

KAPPA = -2.0 * math.pi
DEFAULT_SCHEDULE = tuple(10.0 ** (-k / 2) for k in range(2, 9))  # 1e-1 .. 1e-4


class SiegelError(ValueError):
    """Im(Omega) is not positive definite."""


@dataclass
class BiextensionPoint:
    Omega: np.ndarray
    W: np.ndarray
    Z: np.ndarray
    alpha: complex

    def __post_init__(self):
        self.Omega = np.atleast_2d(np.asarray(self.Omega, dtype=complex))
        self.W = np.asarray(self.W, dtype=complex).reshape(-1)
        self.Z = np.asarray(self.Z, dtype=complex).reshape(-1)
        g = self.Omega.shape[0] if self.Omega.size else 0
        if self.Omega.size and self.Omega.shape != (g, g):
            raise ValueError("Omega must be square")
        if self.W.shape != (g,) or self.Z.shape != (g,):
            raise ValueError("W and Z must have length g")
        if self.Omega.size and not np.allclose(self.Omega, self.Omega.T, rtol=0, atol=1e-12 * (1 + np.abs(self.Omega).max())):
            raise ValueError("Omega must be symmetric")

    @property
    def genus(self) -> int:
        return self.W.shape[0]


def _cholesky_im(omega: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(omega.imag)
    except np.linalg.LinAlgError:
        raise SiegelError("Im(Omega) is not positive definite") from None


def height_norm(p: BiextensionPoint) -> float:
    """4 pi (Im alpha + Im W (Im Omega)^-1 Im Z)."""
    if p.genus == 0:
        return 4 * math.pi * p.alpha.imag
    L = _cholesky_im(p.Omega)
    y = np.linalg.solve(L, p.Z.imag)
    x = np.linalg.solve(L, p.W.imag)
    return 4 * math.pi * (p.alpha.imag + float(x @ y))


@dataclass
class OrbitData:
    matrices: np.ndarray  # (n, g, g), M_e = c_e c_e^t
    u: np.ndarray  # (n,)
    v: np.ndarray  # (n,)
    c: np.ndarray  # (g, n)
    base: BiextensionPoint
    config: Configuration | None = field(default=None, repr=False)
    delta: MomentumVector | None = field(default=None, repr=False)
    mu: MomentumVector | None = field(default=None, repr=False)

    @property
    def n_edges(self) -> int:
        return self.u.shape[0]

    @property
    def genus(self) -> int:
        return self.c.shape[0]


def zero_base(genus: int) -> BiextensionPoint:
    return BiextensionPoint(np.zeros((genus, genus)), np.zeros(genus), np.zeros(genus), 0j)


def reference_base(genus: int, scale: float = 0.1) -> BiextensionPoint:
    """Omega = i s I, W = Z = i s (1, ..., 1), alpha = i s.

    A nonzero base makes the approach to the limit O(alpha') instead of
    exact, which is what the slope fit needs.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")
    ones = np.ones(genus)
    return BiextensionPoint(1j * scale * np.eye(genus), 1j * scale * ones, 1j * scale * ones, 1j * scale)


def orbit_data_from_graph(
    g: Graph,
    delta: Mapping,
    mu: Mapping,
    base: BiextensionPoint | None = None,
    tree: Sequence[int] | None = None,
) -> OrbitData:
    """Orbit data from two degree-0 vertex divisors (scalar weights summing to 0)."""
    c = Configuration.from_graph(g)
    if tree is None:
        tree = cycle_basis(g).tree
    d = MomentumVector.scalar(delta)
    m = MomentumVector.scalar(mu)
    u = np.array([float(x[0]) for x in tree_routing(g, tree, d)])
    v = np.array([float(x[0]) for x in tree_routing(g, tree, m)])
    cm = np.array([[float(x) for x in row] for row in c.basis]).reshape(c.genus, c.n_edges)
    mats = np.array(
        [[[float(x) for x in row] for row in mat] for mat in pencil(c).matrices]
    ).reshape(c.n_edges, c.genus, c.genus)
    return OrbitData(mats, u, v, cm, base or zero_base(c.genus), c, d, m)


def orbit_point(d: OrbitData, z: Sequence[complex]) -> BiextensionPoint:
    z = np.asarray(z, dtype=complex)
    if z.shape != (d.n_edges,):
        raise ValueError(f"z must have one entry per edge ({d.n_edges})")
    omega = d.base.Omega + np.einsum("e,eij->ij", z, d.matrices)
    W = d.base.W + d.c @ (z * d.u)
    Z = d.base.Z + d.c @ (z * d.v)
    alpha = d.base.alpha - complex(np.sum(z * d.u * d.v))
    if d.genus:
        try:
            np.linalg.cholesky(omega.imag)
        except np.linalg.LinAlgError:
            ev = np.linalg.eigvalsh(omega.imag)
            raise SiegelError(
                f"Im(Omega) has eigenvalues {ev.tolist()}; increase Im z_e on edges "
                f"{[e for e in range(d.n_edges) if z[e].imag <= 0]} or shrink alpha'"
            ) from None
    return BiextensionPoint(omega, W, Z, alpha)


def scaled_height(d: OrbitData, Y: np.ndarray, alpha_prime: float, X: np.ndarray | None = None) -> float:
    X = np.zeros(d.n_edges) if X is None else X
    return alpha_prime * height_norm(orbit_point(d, X + 1j * Y / alpha_prime))


def neville_at_zero(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Value at 0 of the interpolating polynomial through (xs, ys)."""
    p = list(map(float, ys))
    xs = list(map(float, xs))
    n = len(xs)
    for k in range(1, n):
        for i in range(n - k):
            p[i] = (xs[i + k] * p[i] - xs[i] * p[i + 1]) / (xs[i + k] - xs[i])
    return p[0]


def symanzik_ratio(d: OrbitData, Y: Sequence[float]) -> float:
    """polarize(delta, mu)(Y) / psi(Y) from the exact polynomials."""
    if d.config is None:
        raise ValueError("orbit data carries no configuration")
    Y = [float(y) for y in Y]
    psi = first_symanzik(d.config)
    pol = polarize(d.config, d.delta, d.mu)
    return pol.with_variables(d.config.variables).evaluate_float(Y) / psi.evaluate_float(Y)


def limit_value(d: OrbitData, Y: Sequence[float]) -> float:
    """4 pi (W M^-1 Z - S) at A = Y, the exact alpha' -> 0 limit."""
    Y = np.asarray(Y, dtype=float)
    S = float(np.sum(Y * d.u * d.v))
    if d.genus == 0:
        return -4 * math.pi * S
    M = np.einsum("e,eij->ij", Y, d.matrices)
    W = d.c @ (Y * d.u)
    Z = d.c @ (Y * d.v)
    return 4 * math.pi * (float(W @ np.linalg.solve(M, Z)) - S)


def bordered_identity(d: OrbitData, Y: Sequence[float]) -> tuple[float, float]:
    """(S det M - W adj(M) Z, (S - W M^-1 Z) det M): the same number by two routes."""
    Y = np.asarray(Y, dtype=float)
    S = float(np.sum(Y * d.u * d.v))
    if d.genus == 0:
        return S, S
    M = np.einsum("e,eij->ij", Y, d.matrices)
    W = d.c @ (Y * d.u)
    Z = d.c @ (Y * d.v)
    detM = float(np.linalg.det(M))
    g = d.genus
    adj = np.empty((g, g))
    for i in range(g):
        for j in range(g):
            minor = np.delete(np.delete(M, j, axis=0), i, axis=1)
            adj[i, j] = (-1) ** (i + j) * (np.linalg.det(minor) if minor.size else 1.0)
    return S * detM - float(W @ adj @ Z), (S - float(W @ np.linalg.solve(M, Z))) * detM


@dataclass
class TensionResult:
    schedule: list[float]
    ratios: list[float]
    fitted_limit: float
    symanzik_ratio: float
    kappa: float | None
    slope: float | None

    def to_json(self) -> dict:
        return {
            "schedule": self.schedule,
            "ratios": self.ratios,
            "fitted_limit": self.fitted_limit,
            "symanzik_ratio": self.symanzik_ratio,
            "kappa": self.kappa,
            "error_slope": self.slope,
        }


def error_slope(schedule: Sequence[float], ratios: Sequence[float], limit: float) -> float | None:
    """Least-squares slope of log|ratio - limit| against log alpha'."""
    pts = [(math.log(a), math.log(abs(r - limit))) for a, r in zip(schedule, ratios) if r != limit]
    if len(pts) < 2:
        return None
    xs, ys = zip(*pts)
    return float(np.polyfit(xs, ys, 1)[0])


def tension_limit(
    d: OrbitData,
    Y: Sequence[float],
    schedule: Sequence[float] = DEFAULT_SCHEDULE,
    X: Sequence[float] | None = None,
) -> TensionResult:
    Y = np.asarray(Y, dtype=float)
    if Y.shape != (d.n_edges,) or np.any(Y <= 0):
        raise ValueError("Y must be a positive vector with one entry per edge")
    schedule = [float(a) for a in schedule]
    if len(schedule) < 2 or any(b >= a for a, b in zip(schedule, schedule[1:])) or schedule[-1] <= 0:
        raise ValueError("schedule must be strictly decreasing positive values")
    X = np.zeros(d.n_edges) if X is None else np.asarray(X, dtype=float)
    try:
        ratios = [scaled_height(d, Y, a, X) for a in schedule]
    except SiegelError as exc:
        raise SiegelError(f"{exc}; at alpha'={schedule[0]} try a smaller alpha' or larger Y") from None
    fitted = neville_at_zero(schedule, ratios)
    sym = symanzik_ratio(d, Y) if d.config is not None else float("nan")
    kappa = fitted / sym if sym and math.isfinite(sym) else None
    return TensionResult(schedule, ratios, fitted, sym, kappa, error_slope(schedule, ratios, fitted))


def calibrate_kappa() -> float:
    """Measure the limit/Symanzik ratio on the bubble with u = (1, 0), v = (0, 1)."""
    from .graph import build_graph

    g = build_graph([(1, 2), (1, 2)])
    # spanning tree {e1}: delta routes through e1 only; mu through e2 via the tree {e2}
    c = Configuration.from_graph(g)
    d = orbit_data_from_graph(g, {1: -1, 2: 1}, {1: -1, 2: 1})
    d.u = np.array([1.0, 0.0])
    d.v = np.array([0.0, 1.0])
    Y = np.array([1.0, 1.0])
    lim = limit_value(d, Y)
    psi = first_symanzik(c).evaluate_float(list(Y))
    # u and v are both lifts of the unit divisor, so polarize = 2 phi = 2 Y1 Y2
    return lim / (2 * Y[0] * Y[1] / psi)
