"""Configurations H in Q^E, their rank-one pencils, and Symanzik polynomials.

Sign convention for the second polynomial: ``phi(H, w)`` is the first
Symanzik polynomial of the enlarged configuration ``H_w`` (the preimage of
``w`` in Q^E).  With a lift ``w~`` of ``w`` this is

    phi = S * psi - W^t adj(M) W,   S = sum_e A_e q(w~_e),  W = sum_e A_e c_e w~_e,

so for positive edge weights and a Euclidean form ``phi / psi`` is the
minimum of ``sum_e A_e q(edge momentum)`` over the fibre, i.e. nonnegative.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .graph import Graph, GraphError, cycle_basis, spanning_trees
from .poly import MultiPoly, adjugate, det


@dataclass(frozen=True)
class QuadraticSpace:
    """Diagonal quadratic form on R^D with entries +-1."""

    signature: tuple[int, ...] = (1,)

    def __post_init__(self):
        if not self.signature or any(s not in (1, -1) for s in self.signature):
            raise ValueError(f"signature entries must be +1 or -1, got {self.signature}")
        object.__setattr__(self, "signature", tuple(int(s) for s in self.signature))

    @classmethod
    def euclidean(cls, dim: int) -> QuadraticSpace:
        return cls((1,) * dim)

    @classmethod
    def minkowski(cls, dim: int) -> QuadraticSpace:
        return cls((1,) + (-1,) * (dim - 1))

    @property
    def dim(self) -> int:
        return len(self.signature)

    @property
    def is_euclidean(self) -> bool:
        return all(s == 1 for s in self.signature)

    @property
    def is_minkowski(self) -> bool:
        return self.signature[0] == 1 and len(self.signature) > 1 and all(
            s == -1 for s in self.signature[1:]
        )

    def form(self, u: Sequence, v: Sequence):
        if len(u) != self.dim or len(v) != self.dim:
            raise ValueError("vector dimension does not match the quadratic space")
        return sum((s * a * b for s, a, b in zip(self.signature, u, v)), Fraction(0) if _exact(u, v) else 0.0)

    def q(self, u: Sequence):
        return self.form(u, u)


def _exact(*vecs) -> bool:
    return all(not isinstance(x, float) for v in vecs for x in v)


@dataclass(frozen=True)
class Configuration:
    """Row basis (g x n, rational) of a subspace H of Q^E."""

    basis: tuple[tuple[Fraction, ...], ...]
    variables: tuple[str, ...]
    graph: Graph | None = field(default=None, compare=False)

    def __post_init__(self):
        basis = tuple(tuple(Fraction(x) for x in row) for row in self.basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "variables", tuple(self.variables))
        n = len(self.variables)
        if any(len(row) != n for row in basis):
            raise ValueError("basis rows must have one entry per edge variable")
        if basis and linalg.rank(basis) != len(basis):
            raise ValueError("configuration basis is not of full row rank")

    @classmethod
    def from_graph(cls, g: Graph) -> Configuration:
        rows = cycle_basis(g).rows
        return cls(tuple(tuple(int(x) for x in r) for r in rows), g.edge_names, g)

    @classmethod
    def from_matrix(cls, basis: Sequence[Sequence], variables: Sequence[str] | None = None):
        basis = [list(r) for r in basis]
        n = len(basis[0]) if basis else len(variables or ())
        variables = tuple(variables) if variables is not None else tuple(f"A{i}" for i in range(1, n + 1))
        return cls(tuple(tuple(r) for r in basis), variables)

    @property
    def genus(self) -> int:
        return len(self.basis)

    @property
    def n_edges(self) -> int:
        return len(self.variables)

    def column(self, e: int) -> tuple[Fraction, ...]:
        """Coordinates of the functional e^v on H in the chosen basis."""
        return tuple(row[e] for row in self.basis)

    def transformed(self, u: Sequence[Sequence]) -> Configuration:
        """Configuration with basis ``U @ basis`` (U square invertible)."""
        new = [linalg.matvec(list(zip(*self.basis)), row) for row in u]
        return Configuration(tuple(tuple(r) for r in new), self.variables, self.graph)


@dataclass(frozen=True)
class RankOnePencil:
    matrices: tuple  # per edge, g x g tuple of tuples of Fraction

    def symbolic(self, variables: Sequence[str]) -> list[list[MultiPoly]]:
        """M = sum_e A_e M_e as a polynomial matrix."""
        g = len(self.matrices[0]) if self.matrices else 0
        return [
            [MultiPoly.linear_form([m[i][j] for m in self.matrices], variables) for j in range(g)]
            for i in range(g)
        ]

    def evaluate(self, point: Sequence) -> list[list[Fraction]]:
        g = len(self.matrices[0]) if self.matrices else 0
        point = [Fraction(x) for x in point]
        return [
            [sum((a * m[i][j] for a, m in zip(point, self.matrices)), Fraction(0)) for j in range(g)]
            for i in range(g)
        ]


def pencil(c: Configuration) -> RankOnePencil:
    mats = []
    for e in range(c.n_edges):
        col = c.column(e)
        mats.append(tuple(tuple(a * b for b in col) for a in col))
    return RankOnePencil(tuple(mats))


def symbolic_matrix(c: Configuration) -> list[list[MultiPoly]]:
    return pencil(c).symbolic(c.variables)


def first_symanzik(c: Configuration, method: str = "determinant") -> MultiPoly:
    """psi(H) = det(sum_e A_e M_e), or the spanning-tree sum for graphs."""
    if method == "determinant":
        return det(symbolic_matrix(c), c.variables)
    if method == "spanning_tree":
        if c.graph is None:
            raise ValueError("spanning_tree method needs a configuration built from a graph")
        return kirchhoff_polynomial(c.graph)
    raise ValueError(f"unknown method {method!r}")


def kirchhoff_polynomial(g: Graph) -> MultiPoly:
    """sum over spanning trees T of prod_{e not in T} A_e."""
    n = g.n_edges
    terms: dict[tuple[int, ...], int] = {}
    for tree in spanning_trees(g):
        exp = tuple(0 if e in tree else 1 for e in range(n))
        terms[exp] = terms.get(exp, 0) + 1
    return MultiPoly(g.edge_names, terms)


def graph_psi(g: Graph) -> MultiPoly:
    """psi of H_1(G) by the determinant route; works for disconnected graphs."""
    return first_symanzik(Configuration.from_graph(g))


# -- external momenta -----------------------------------------------------


@dataclass(frozen=True)
class MomentumVector:
    """Degree-0 vertex assignment with values in a quadratic space."""

    values: Mapping
    space: QuadraticSpace = QuadraticSpace()

    def __post_init__(self):
        vals = {}
        for v, p in self.values.items():
            if not isinstance(p, (tuple, list)):
                p = (p,)
            if len(p) != self.space.dim:
                raise ValueError(f"momentum at {v!r} has dimension {len(p)}, expected {self.space.dim}")
            vals[v] = tuple(Fraction(x) for x in p)
        object.__setattr__(self, "values", vals)
        total = [sum((p[k] for p in vals.values()), Fraction(0)) for k in range(self.space.dim)]
        if any(total):
            raise ValueError(f"momenta do not sum to zero (total {total})")

    @classmethod
    def scalar(cls, values: Mapping) -> MomentumVector:
        return cls({v: (x,) for v, x in values.items()}, QuadraticSpace((1,)))

    def at(self, v) -> tuple[Fraction, ...]:
        return self.values.get(v, (Fraction(0),) * self.space.dim)

    def __add__(self, other: MomentumVector) -> MomentumVector:
        if other.space != self.space:
            raise ValueError("momenta live in different quadratic spaces")
        keys = list(self.values) + [k for k in other.values if k not in self.values]
        return MomentumVector(
            {k: tuple(a + b for a, b in zip(self.at(k), other.at(k))) for k in keys}, self.space
        )

    def scaled(self, t) -> MomentumVector:
        t = Fraction(t)
        return MomentumVector({k: tuple(t * x for x in p) for k, p in self.values.items()}, self.space)


def tree_routing(g: Graph, tree: Sequence[int], momenta: MomentumVector) -> list[tuple[Fraction, ...]]:
    """Edge momenta supported on ``tree`` with boundary equal to the vertex momenta.

    For tree edge e = (t -> h) the flow into the h-side equals the total
    external momentum on that side.  Non-tree edges carry zero.
    """
    tree = list(tree)
    if len(tree) != g.n_vertices - 1:
        raise GraphError("routing tree must have |V| - 1 edges")
    D = momenta.space.dim
    zero = (Fraction(0),) * D
    adj: dict = {v: [] for v in g.vertices}
    for e in tree:
        t, h = g.endpoints(e)
        if t == h:
            raise GraphError("routing tree contains a loop")
        adj[t].append((h, e))
        adj[h].append((t, e))
    flows = [zero] * g.n_edges
    for e in tree:
        t, h = g.endpoints(e)
        # component of h after removing e
        side = {h}
        stack = [h]
        while stack:
            v = stack.pop()
            for w, f in adj[v]:
                if f != e and w not in side:
                    side.add(w)
                    stack.append(w)
        if t in side:
            raise GraphError("routing edges do not form a tree")
        flows[e] = tuple(sum((momenta.at(v)[k] for v in side), Fraction(0)) for k in range(D))
    reach = {g.vertices[0]}
    stack = [g.vertices[0]]
    while stack:
        v = stack.pop()
        for w, _ in adj[v]:
            if w not in reach:
                reach.add(w)
                stack.append(w)
    if len(reach) != g.n_vertices:
        raise GraphError("routing tree does not span the graph")
    return flows


def edge_lift(c: Configuration, w: MomentumVector, tree: Sequence[int] | None = None):
    if c.graph is None:
        raise ValueError("momentum lifting requires a graph configuration")
    if tree is None:
        tree = cycle_basis(c.graph).tree
    return tree_routing(c.graph, tree, w)


def second_symanzik(
    c: Configuration,
    w: MomentumVector,
    method: str = "bordered_determinant",
    tree: Sequence[int] | None = None,
) -> MultiPoly:
    """phi(H, w): psi of the enlarged configuration H_w."""
    lift = edge_lift(c, w, tree)
    if method == "enlarged_config":
        if w.space.dim != 1:
            raise ValueError("enlarged_config handles scalar momenta only; use bordered_determinant")
        if w.space.signature != (1,):
            raise ValueError("enlarged_config requires the positive 1-dimensional form")
        rows = [list(r) for r in c.basis] + [[x[0] for x in lift]]
        gram = _gram_symbolic(rows, c.variables)
        return det(gram, c.variables)
    if method == "bordered_determinant":
        return bordered_phi(c, lift, w.space)
    raise ValueError(f"unknown method {method!r}")


def _gram_symbolic(rows, variables) -> list[list[MultiPoly]]:
    k = len(rows)
    return [
        [MultiPoly.linear_form([a * b for a, b in zip(rows[i], rows[j])], variables) for j in range(k)]
        for i in range(k)
    ]


def bordered_phi(c: Configuration, lift, space: QuadraticSpace) -> MultiPoly:
    """S * psi - W^t adj(M) W with products of momentum components through ``space``."""
    variables = c.variables
    g = c.genus
    M = symbolic_matrix(c)
    psi = det(M, variables)
    S = MultiPoly.linear_form([space.q(lift[e]) for e in range(c.n_edges)], variables)
    # W[i][k]: k-th momentum component of the i-th border entry
    W = [
        [
            MultiPoly.linear_form([c.basis[i][e] * lift[e][k] for e in range(c.n_edges)], variables)
            for k in range(space.dim)
        ]
        for i in range(g)
    ]
    adj = adjugate(M, variables)
    cross = MultiPoly(variables)
    for i in range(g):
        for j in range(g):
            if adj[i][j].is_zero():
                continue
            pair = MultiPoly(variables)
            for k, s in enumerate(space.signature):
                pair = pair + (W[i][k] * W[j][k]) * s
            cross = cross + adj[i][j] * pair
    return S * psi - cross


def polarize(c: Configuration, w: MomentumVector, w2: MomentumVector, tree=None) -> MultiPoly:
    """phi(w + w') - phi(w) - phi(w')."""
    if w.space != w2.space:
        raise ValueError("momenta live in different quadratic spaces")
    return (
        second_symanzik(c, w + w2, tree=tree)
        - second_symanzik(c, w, tree=tree)
        - second_symanzik(c, w2, tree=tree)
    )
