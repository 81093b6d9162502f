"""Propagators, the completed-square form of sum_e A_e f_e, and parametric integrals.

Propagators are ``f_e = Q(q_e) + mass_sign * m_e^2`` where ``q_e`` is the
momentum on edge e.  ``mass_sign = -1`` is the physics convention
``q^2 - m^2``; the Euclidean integrals use ``mass_sign = +1`` so that every
f_e is positive.

With loop coordinates x (one D-vector per basis cycle),

    sum_e A_e f_e = x M x - 2 x B p + p Gamma p + mass_sign * mu,

and after completing the square the constant term is ``phi / psi`` with

    phi = psi * (p Gamma p + mass_sign * mu) - (Bp)^t adj(M) (Bp).

For mass_sign = -1 and zero masses this is the same ``phi`` as
:func:`feyngraph.symanzik.second_symanzik`.

Integrals over the simplex are reported in expectation form: the value is
``(n-1)!`` times the integral against the flat measure, i.e. the mean under
the uniform Dirichlet distribution.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from . import _kernels, linalg
from .graph import Graph, GraphError, cycle_basis, is_spanning_tree, laplacian
from .poly import MultiPoly, adjugate, det
from .symanzik import (
    Configuration,
    MomentumVector,
    QuadraticSpace,
    first_symanzik,
    symbolic_matrix,
    tree_routing,
)


class PoleError(ArithmeticError):
    """A propagator vanishes at the evaluation point."""


@dataclass(frozen=True)
class Kinematics:
    momenta: MomentumVector
    masses: tuple  # one per edge
    mass_sign: int = -1

    def __post_init__(self):
        masses = tuple(m if isinstance(m, float) else Fraction(m) for m in self.masses)
        if any(m < 0 for m in masses):
            raise ValueError("masses must be nonnegative")
        if self.mass_sign not in (1, -1):
            raise ValueError("mass_sign must be +1 or -1")
        object.__setattr__(self, "masses", masses)

    @classmethod
    def build(cls, space: QuadraticSpace, vertex_momenta: Mapping, masses: Sequence, mass_sign: int = -1):
        return cls(MomentumVector(dict(vertex_momenta), space), tuple(masses), mass_sign)

    @property
    def space(self) -> QuadraticSpace:
        return self.momenta.space

    def with_mass_sign(self, sign: int) -> Kinematics:
        return Kinematics(self.momenta, self.masses, sign)

    def massless(self) -> Kinematics:
        return Kinematics(self.momenta, tuple(Fraction(0) for _ in self.masses), self.mass_sign)

    def check_graph(self, g: Graph) -> None:
        if len(self.masses) != g.n_edges:
            raise ValueError(f"{len(self.masses)} masses given for {g.n_edges} edges")
        unknown = [v for v in self.momenta.values if v not in set(g.vertices)]
        if unknown:
            raise ValueError(f"momenta on unknown vertices {unknown}")


# -- completed square ----------------------------------------------------------------


@dataclass
class QuadDecomposition:
    M: list  # g x g MultiPoly
    B: list  # g x (|V|-1) MultiPoly
    Gamma: list  # (|V|-1) x (|V|-1) MultiPoly
    mu: MultiPoly
    variables: tuple[str, ...]
    vertices: tuple  # the |V|-1 vertices indexing B's columns (all but the first)
    momenta: list  # vertex momenta for ``vertices``
    space: QuadraticSpace
    mass_sign: int
    basis: tuple  # cycle rows c_i
    routing: list  # routing[e][v]: coefficient of p_v in the tree-routed momentum of e
    tree: tuple[int, ...] = ()

    @property
    def genus(self) -> int:
        return len(self.M)

    def edge_momenta(self, x: Sequence[Sequence]) -> list[tuple]:
        """q_e = sum_i x_i c_ie + sum_v routing[e][v] p_v."""
        D = self.space.dim
        out = []
        for e in range(len(self.variables)):
            comp = []
            for k in range(D):
                val = sum((self.routing[e][j] * self.momenta[j][k] for j in range(len(self.vertices))), Fraction(0))
                val += sum((x[i][k] * self.basis[i][e] for i in range(self.genus)), Fraction(0))
                comp.append(val)
            out.append(tuple(comp))
        return out

    def propagator_sum(self, a: Sequence, x: Sequence[Sequence], masses: Sequence) -> Fraction:
        """sum_e a_e f_e evaluated directly from edge momenta."""
        q = self.edge_momenta(x)
        return sum(
            (Fraction(ae) * (self.space.q(qe) + self.mass_sign * Fraction(m) ** 2) for ae, qe, m in zip(a, q, masses)),
            Fraction(0),
        )

    def quadric(self, a: Sequence, x: Sequence[Sequence]) -> Fraction:
        """x M x - 2 x B p + p Gamma p + mass_sign * mu at (a, x)."""
        form = self.space.form
        g, nv = self.genus, len(self.vertices)
        Mv = [[self.M[i][j].evaluate(a) for j in range(g)] for i in range(g)]
        Bv = [[self.B[i][v].evaluate(a) for v in range(nv)] for i in range(g)]
        Gv = [[self.Gamma[v][w].evaluate(a) for w in range(nv)] for v in range(nv)]
        p = self.momenta
        total = Fraction(0)
        for i in range(g):
            for j in range(g):
                total += Mv[i][j] * form(x[i], x[j])
            for v in range(nv):
                total -= 2 * Bv[i][v] * form(x[i], p[v])
        for v in range(nv):
            for w in range(nv):
                total += Gv[v][w] * form(p[v], p[w])
        return total + self.mass_sign * self.mu.evaluate(a)

    def bp(self) -> list[list[MultiPoly]]:
        """(Bp)_i as a D-vector of polynomials."""
        D = self.space.dim
        zero = MultiPoly(self.variables)
        out = []
        for i in range(self.genus):
            row = []
            for k in range(D):
                acc = zero
                for v, pv in enumerate(self.momenta):
                    if pv[k]:
                        acc = acc + self.B[i][v] * pv[k]
                row.append(acc)
            out.append(row)
        return out

    def p_gamma_p(self) -> MultiPoly:
        acc = MultiPoly(self.variables)
        for v, pv in enumerate(self.momenta):
            for w, pw in enumerate(self.momenta):
                s = self.space.form(pv, pw)
                if s:
                    acc = acc + self.Gamma[v][w] * s
        return acc


def routing_matrix(g: Graph, tree: Sequence[int]) -> tuple[tuple, list[list[Fraction]]]:
    """Columns: tree-routed edge momenta for a unit source at v and unit sink at the first vertex."""
    v0, rest = g.vertices[0], g.vertices[1:]
    cols = []
    for v in rest:
        flows = tree_routing(g, tree, MomentumVector.scalar({v: 1, v0: -1}))
        cols.append([f[0] for f in flows])
    routing = [[cols[j][e] for j in range(len(rest))] for e in range(g.n_edges)]
    return tuple(rest), routing


def route_and_decompose(g: Graph, kin: Kinematics, tree: Sequence[int] | None = None) -> QuadDecomposition:
    kin.check_graph(g)
    if not g.is_connected():
        raise GraphError("momentum routing needs a connected graph")
    cb = cycle_basis(g)
    if tree is None:
        tree = cb.tree
    tree = tuple(tree)
    if not is_spanning_tree(g, tree):
        raise GraphError(f"edges {tree} do not form a spanning tree")
    c = Configuration.from_graph(g)
    variables = c.variables
    rest, R = routing_matrix(g, tree)
    nv, n = len(rest), g.n_edges
    B = [
        [MultiPoly.linear_form([-c.basis[i][e] * R[e][v] for e in range(n)], variables) for v in range(nv)]
        for i in range(c.genus)
    ]
    Gamma = [
        [MultiPoly.linear_form([R[e][v] * R[e][w] for e in range(n)], variables) for w in range(nv)]
        for v in range(nv)
    ]
    mu = MultiPoly.linear_form([Fraction(m) ** 2 for m in kin.masses], variables)
    return QuadDecomposition(
        M=symbolic_matrix(c),
        B=B,
        Gamma=Gamma,
        mu=mu,
        variables=variables,
        vertices=rest,
        momenta=[kin.momenta.at(v) for v in rest],
        space=kin.space,
        mass_sign=kin.mass_sign,
        basis=c.basis,
        routing=R,
        tree=tree,
    )


def phi_from_decomposition(d: QuadDecomposition, psi: MultiPoly | None = None) -> MultiPoly:
    """psi * (p Gamma p + mass_sign * mu) - (Bp)^t adj(M) (Bp)."""
    variables = d.variables
    if psi is None:
        psi = det(d.M, variables)
    psi = psi.with_variables(variables)
    if d.genus != len(d.basis):
        raise ValueError("decomposition has inconsistent dimensions")
    const = d.p_gamma_p() + d.mu * d.mass_sign
    phi = psi * const
    if d.genus:
        bp = d.bp()
        adj = adjugate(d.M, variables)
        for i in range(d.genus):
            for j in range(d.genus):
                if adj[i][j].is_zero():
                    continue
                pair = MultiPoly(variables)
                for k, s in enumerate(d.space.signature):
                    pair = pair + bp[i][k] * bp[j][k] * s
                phi = phi - adj[i][j] * pair
    return phi


def amplitude_phi(g: Graph, kin: Kinematics, tree: Sequence[int] | None = None) -> MultiPoly:
    d = route_and_decompose(g, kin, tree)
    return phi_from_decomposition(d, first_symanzik(Configuration.from_graph(g)))


# -- quotient metric -------------------------------------------------------------------


def quotient_metric(g: Graph, a: Sequence, kin: Kinematics) -> Fraction:
    """min over edge momenta with boundary p of sum_e a_e |q_e|^2, exactly.

    Solved as an electrical network: resistances a_e, currents q, one
    grounded vertex per component; the minimum is p . L^+ p per component.
    """
    a = [Fraction(x) for x in a]
    if len(a) != g.n_edges:
        raise ValueError("one weight per edge required")
    if any(x <= 0 for x in a):
        raise ValueError("edge weights must be positive")
    if not kin.space.is_euclidean:
        raise ValueError("the quotient metric needs a Euclidean form")
    if any(m for m in kin.masses):
        raise ValueError("the quotient metric is defined for zero masses")
    kin.check_graph(g)
    lap = laplacian(g, [1 / x for x in a])
    idx = g.vertex_index()
    total = Fraction(0)
    for comp in g.components():
        keep = [idx[v] for v in comp[1:]]
        if not keep:
            continue
        sub = [[lap[i][j] for j in keep] for i in keep]
        for k in range(kin.space.dim):
            rhs = [kin.momenta.at(g.vertices[i])[k] for i in keep]
            if not any(rhs):
                continue
            lam = linalg.solve(sub, rhs)
            total += sum((x * y for x, y in zip(lam, rhs)), Fraction(0))
    return total


# -- parametric integrand --------------------------------------------------------------


@dataclass
class ParametricIntegrand:
    """psi^psi_exponent / phi^phi_exponent on the simplex, with metadata."""

    psi: MultiPoly
    phi: MultiPoly
    n_edges: int
    genus: int
    dimension: int
    psi_exponent: Fraction
    phi_exponent: Fraction
    _arrays: tuple = field(default=(), repr=False)

    @property
    def log_divergent(self) -> bool:
        return self.phi_exponent == 0

    @property
    def n_vars(self) -> int:
        return self.n_edges

    def prefactor(self) -> float:
        """pi^(gD/2) Gamma(n - gD/2) / Gamma(n): converts the simplex mean into the loop integral."""
        if self.phi_exponent <= 0 and self.phi_exponent.denominator == 1:
            return math.inf
        half = self.genus * self.dimension / 2
        return math.pi**half * math.gamma(self.n_edges - half) / math.gamma(self.n_edges)

    def _kernel_arrays(self):
        if not self._arrays:
            psi_e, psi_c = self.psi.arrays()
            phi_e, phi_c = self.phi.arrays(self.psi.variables)
            self._arrays = (psi_e, psi_c, phi_e, phi_c)
        return self._arrays

    def __call__(self, a: np.ndarray) -> np.ndarray:
        a = np.ascontiguousarray(a, dtype=np.float64)
        psi_e, psi_c, phi_e, phi_c = self._kernel_arrays()
        return _kernels.kernel("ratio_values")(
            psi_e, psi_c, phi_e, phi_c, a, float(self.psi_exponent), float(self.phi_exponent)
        )

    def exponents(self) -> dict:
        return {"psi": str(self.psi_exponent), "phi": str(self.phi_exponent)}


def parametric_integrand(g: Graph, D: int, kin: Kinematics, tree: Sequence[int] | None = None) -> ParametricIntegrand:
    if D < 1:
        raise ValueError("dimension must be at least 1")
    c = Configuration.from_graph(g)
    psi = first_symanzik(c)
    n, genus = g.n_edges, c.genus
    psi_exp = Fraction(n) - Fraction((genus + 1) * D, 2)
    phi_exp = Fraction(n) - Fraction(genus * D, 2)
    if phi_exp == 0:
        phi = MultiPoly.constant(1, c.variables)
    else:
        phi = phi_from_decomposition(route_and_decompose(g, kin, tree), psi)
    return ParametricIntegrand(psi, phi, n, genus, D, psi_exp, phi_exp)


@dataclass
class ExponentialIntegrand:
    """exp(i phi/psi) / psi^(D/2) on the open orthant, with constant 1/(i (4 pi)^2)^g."""

    psi: MultiPoly
    phi: MultiPoly
    genus: int
    dimension: int

    @property
    def constant(self) -> complex:
        return 1 / (1j * (4 * math.pi) ** 2) ** self.genus

    def __call__(self, a: np.ndarray) -> np.ndarray:
        a = np.ascontiguousarray(np.atleast_2d(a), dtype=np.float64)
        psi = _kernels.kernel("poly_eval")(*self.psi.arrays(), a)
        phi = _kernels.kernel("poly_eval")(*self.phi.arrays(self.psi.variables), a)
        return np.exp(1j * phi / psi) / psi ** (self.dimension / 2)


def exponential_integrand(g: Graph, D: int, kin: Kinematics) -> ExponentialIntegrand:
    c = Configuration.from_graph(g)
    psi = first_symanzik(c)
    phi = phi_from_decomposition(route_and_decompose(g, kin), psi)
    return ExponentialIntegrand(psi, phi, c.genus, D)


# -- simplex integration ---------------------------------------------------------------

METHODS = ("plain_mc", "stratified", "quadrature")
MAX_CHUNK = 1 << 16


@dataclass
class IntegralEstimate:
    value: float
    std_error: float
    n_samples: int
    seed: int
    method: str
    converged: bool = True
    history: list = field(default_factory=list)  # (n, value, std_error) at N/4, N/2, N

    def to_json(self) -> dict:
        return {
            "value": self.value,
            "std_error": self.std_error,
            "n_samples": self.n_samples,
            "seed": self.seed,
            "method": self.method,
            "converged": self.converged,
        }


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    """Counter-based stream for chunk ``index``; independent of how chunks are scheduled."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(index,))))


def _chunking(n: int) -> list[int]:
    size = min(MAX_CHUNK, max(1, -(-n // 16)))
    sizes = [size] * (n // size)
    if n % size:
        sizes.append(n % size)
    return sizes


def _map_chunks(fn: Callable[[int, int], tuple], sizes: list[int], workers: int | None) -> list[tuple]:
    workers = workers or int(os.environ.get("FEYNGRAPH_THREADS", "1"))
    if workers <= 1 or len(sizes) == 1:
        return [fn(i, m) for i, m in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(len(sizes)), sizes))


def _mc_chunk(integrand, n_vars: int, seed: int, stratified_total: int | None):
    dirichlet = _kernels.kernel("dirichlet_rows")
    moments = _kernels.kernel("moments")

    def run(i: int, m: int):
        rng = chunk_rng(seed, i)
        if n_vars == 1:
            vals = np.asarray(integrand(np.ones((m, 1))), dtype=np.float64)
            return moments(vals) + (m, float(np.max(np.abs(vals))))
        u = rng.random((m, n_vars - 1))
        if stratified_total is not None:
            # m is even; sample pairs share a stratum of the first uniform coordinate
            first = i * MAX_CHUNK_PAIRS
            strata = first + np.repeat(np.arange(m // 2), 2)
            u[:, 0] = (strata + u[:, 0]) / stratified_total
        vals = np.asarray(integrand(dirichlet(u)), dtype=np.float64)
        peak = float(np.max(np.abs(vals)))
        if stratified_total is None:
            return moments(vals) + (m, peak)
        s, _ = moments(vals)
        diff = vals[0::2] - vals[1::2]
        _, d2 = moments(diff)
        return (s, d2, m, peak)

    return run


MAX_CHUNK_PAIRS = MAX_CHUNK // 2


def _dominated(parts: list[tuple], share: float = 0.05) -> bool:
    """True when one sample carries more than ``share`` of the total: a heavy-tail symptom."""
    total = math.fsum(abs(p[0]) for p in parts)
    return total > 0 and max(p[3] for p in parts) > share * total


def _summarise(parts: list[tuple], stratified: bool) -> tuple[float, float, int]:
    n = sum(p[2] for p in parts)
    s = math.fsum(p[0] for p in parts)
    mean = s / n
    if stratified:
        h = n // 2
        var_mean = math.fsum(p[1] for p in parts) / (4.0 * h * h)
    else:
        s2 = math.fsum(p[1] for p in parts)
        var = max(s2 - n * mean * mean, 0.0) / (n - 1) if n > 1 else 0.0
        var_mean = var / n
    return mean, math.sqrt(var_mean), n


def _convergence(history: list[tuple]) -> bool:
    vals = [h[1] for h in history]
    ses = [h[2] for h in history]
    if not all(math.isfinite(x) for x in vals + ses):
        return False
    if len(history) < 3:
        return True
    (n1, _, se1), (_, v2, se2), (n3, v3, se3) = history
    # with finite variance the per-sample spread stays put as n quadruples
    sd1, sd3 = se1 * math.sqrt(n1), se3 * math.sqrt(n3)
    if sd1 > 0 and sd3 > 1.5 * sd1:
        return False
    return abs(v3 - v2) <= 5 * max(se2, 1e-300) or se2 == 0


def integrate_simplex(
    integrand: Callable[[np.ndarray], np.ndarray],
    method: str = "plain_mc",
    n_samples: int = 100_000,
    seed: int = 0,
    n_vars: int | None = None,
    workers: int | None = None,
) -> IntegralEstimate:
    """Mean of ``integrand`` under the uniform distribution on the simplex.

    ``integrand`` maps an (N, n) array of simplex points to N values.  For
    ``quadrature`` the sample budget sets the Gauss-Legendre order per axis.
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    if n_samples <= 0:
        raise ValueError("n_samples must be positive")
    n_vars = n_vars or getattr(integrand, "n_vars", None)
    if not n_vars:
        raise ValueError("n_vars is required for a plain callable")
    if method == "quadrature":
        return _quadrature(integrand, n_vars, n_samples, seed)
    stratified = method == "stratified"
    if stratified:
        n_samples -= n_samples % 2
        if n_samples == 0:
            raise ValueError("stratified sampling needs at least 2 samples")
        sizes = []
        left = n_samples
        while left:
            m = min(MAX_CHUNK, left)
            sizes.append(m)
            left -= m
        run = _mc_chunk(integrand, n_vars, seed, n_samples // 2)
    else:
        sizes = _chunking(n_samples)
        run = _mc_chunk(integrand, n_vars, seed, None)
    parts = _map_chunks(run, sizes, workers)
    history = []
    k = len(parts)
    for frac in (4, 2, 1):
        upto = max(1, k // frac) if frac > 1 else k
        if frac > 1 and (k < 4 or stratified):
            continue
        mean, se, n = _summarise(parts[:upto], stratified)
        history.append((n, mean, se))
    mean, se, n = _summarise(parts, stratified)
    converged = _convergence(history) and not (n >= 1000 and _dominated(parts))
    return IntegralEstimate(mean, se, n, seed, method, converged, history)


def stick_breaking_rule(n_vars: int, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Product Gauss-Legendre nodes on the simplex with weights summing to 1."""
    if n_vars == 1:
        return np.ones((1, 1)), np.ones(1)
    x, w = np.polynomial.legendre.leggauss(order)
    t1, w1 = (x + 1) / 2, w / 2
    k = n_vars - 1
    grids = np.meshgrid(*([t1] * k), indexing="ij")
    wgrids = np.meshgrid(*([w1] * k), indexing="ij")
    t = np.stack([gr.ravel() for gr in grids], axis=1)
    wt = np.prod(np.stack([gr.ravel() for gr in wgrids], axis=1), axis=1)
    pts = np.empty((t.shape[0], n_vars))
    rest = np.ones(t.shape[0])
    jac = np.ones(t.shape[0])
    for j in range(k):
        pts[:, j] = rest * t[:, j]
        jac *= rest
        rest = rest * (1 - t[:, j])
    pts[:, k] = rest
    # flat simplex volume is 1/k!, so k! * jacobian gives the uniform-distribution weight
    return pts, wt * jac * math.factorial(k)


def _quadrature(integrand, n_vars: int, budget: int, seed: int) -> IntegralEstimate:
    k = max(n_vars - 1, 1)
    order = max(4, int(round(budget ** (1.0 / k))))
    values = []
    for o in (order, max(2, order // 2)):
        pts, wts = stick_breaking_rule(n_vars, o)
        vals = np.asarray(integrand(pts), dtype=np.float64)
        values.append(math.fsum(vals * wts))
    err = abs(values[0] - values[1])
    n_pts = order ** (n_vars - 1) if n_vars > 1 else 1
    return IntegralEstimate(values[0], err, n_pts, seed, "quadrature", math.isfinite(values[0]), [])


# -- Schwinger and Gaussian identities ------------------------------------------------


def schwinger_integrand(f: Sequence[float]) -> Callable[[np.ndarray], np.ndarray]:
    """a -> 1 / (sum_i a_i f_i)^n; its simplex mean equals 1 / prod f_i."""
    f = np.asarray(f, dtype=np.float64)
    if np.any(f <= 0):
        raise ValueError("Schwinger check needs positive f_i")
    n = len(f)

    def fn(a: np.ndarray) -> np.ndarray:
        return 1.0 / (a @ f) ** n

    fn.n_vars = n
    return fn


def gaussian_integral(coeffs: Sequence[float], offset: float, power: int) -> float:
    """Closed form of the integral over R^N of du / (sum_i C_i u_i^2 + L)^power."""
    N = len(coeffs)
    if power <= N / 2:
        raise ValueError("integral diverges unless power > N/2")
    if offset <= 0 or any(c <= 0 for c in coeffs):
        raise ValueError("coefficients and offset must be positive")
    return (
        math.pi ** (N / 2)
        * math.gamma(power - N / 2)
        / math.gamma(power)
        * math.prod(c**-0.5 for c in coeffs)
        * offset ** (N / 2 - power)
    )


# -- trees -------------------------------------------------------------------------------


def _inverse_product(factors: Sequence[Fraction]) -> Fraction:
    out = Fraction(1)
    for i, f in enumerate(factors):
        if f == 0:
            raise PoleError(f"propagator {i + 1} is on shell")
        out /= f
    return out


def tree_chain_amplitude(n_vertices: int, kin: Kinematics) -> Fraction:
    """1 / prod_i (Q(p_1 + ... + p_i) + mass_sign m_i^2) for the chain 1 - 2 - ... - n."""
    if n_vertices < 2:
        raise ValueError("a chain needs at least two vertices")
    if len(kin.masses) != n_vertices - 1:
        raise ValueError("one mass per chain edge required")
    D = kin.space.dim
    partial = [Fraction(0)] * D
    factors = []
    for i in range(1, n_vertices):
        partial = [a + b for a, b in zip(partial, kin.momenta.at(i))]
        factors.append(kin.space.q(partial) + kin.mass_sign * Fraction(kin.masses[i - 1]) ** 2)
    return _inverse_product(factors)


def tree_amplitude(g: Graph, kin: Kinematics) -> Fraction:
    """1 / prod_e f_e at the unique point of the fibre (g must be a tree)."""
    if not g.is_connected() or g.loop_number != 0:
        raise GraphError("tree_amplitude needs a tree")
    kin.check_graph(g)
    flows = tree_routing(g, list(g.edges), kin.momenta)
    return _inverse_product(
        [kin.space.q(q) + kin.mass_sign * Fraction(m) ** 2 for q, m in zip(flows, kin.masses)]
    )
