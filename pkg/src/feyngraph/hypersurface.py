"""Probes of the graph hypersurface psi = 0 and of its kernel cover.

The cover pairs a point ``a`` of the hypersurface with a kernel direction of
``M_a = sum_e a_e M_e``; its fibre over ``a`` is the projectivised kernel, of
dimension ``corank(M_a) - 1``.  Patterson's theorem says this equals the
multiplicity of the hypersurface at ``a`` minus one, which
:func:`patterson_scan` checks on sampled exact points.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import linalg
from .graph import Graph
from .poly import MultiPoly
from .symanzik import Configuration, first_symanzik, pencil

log = logging.getLogger(__name__)


def _check_point(a: Sequence, n: int) -> list[Fraction]:
    a = [Fraction(x) for x in a]
    if len(a) != n:
        raise ValueError(f"point has {len(a)} coordinates, expected {n}")
    if not any(a):
        raise ValueError("the zero vector is not a projective point")
    return a


def corank_at(c: Configuration, a: Sequence) -> int:
    a = _check_point(a, c.n_edges)
    if c.genus == 0:
        return 0
    return c.genus - linalg.rank(pencil(c).evaluate(a))


def _partials_nonzero(psi: MultiPoly, a: Sequence[Fraction], p: int) -> bool:
    """Is some p-fold derivative in distinct variables nonzero at a?"""
    acc: dict[tuple[int, ...], Fraction] = {}
    for exp, coef in psi.terms.items():
        support = [i for i, k in enumerate(exp) if k]
        if any(exp[i] > 1 for i in support):
            raise ValueError("multiplicity via distinct partials needs a multilinear polynomial")
        for subset in itertools.combinations(support, p):
            rest = Fraction(coef)
            for i in support:
                if i not in subset:
                    rest *= a[i]
                    if not rest:
                        break
            if rest:
                acc[subset] = acc.get(subset, Fraction(0)) + rest
    return any(acc.values())


def multiplicity_at(c: Configuration, a: Sequence, psi: MultiPoly | None = None) -> int:
    """Order of vanishing of psi at ``a`` (0 off the hypersurface)."""
    a = _check_point(a, c.n_edges)
    if psi is None:
        psi = first_symanzik(c)
    psi = psi.with_variables(c.variables)
    if psi.evaluate(a) != 0:
        return 0
    for p in range(1, c.n_edges + 1):
        if _partials_nonzero(psi, a, p):
            return p
    raise ArithmeticError("psi vanishes identically")


@dataclass
class PattersonSample:
    point: tuple[Fraction, ...]
    corank: int
    multiplicity: int
    kind: str

    @property
    def match(self) -> bool:
        return self.corank == self.multiplicity

    def to_json(self) -> dict:
        return {
            "point": [str(x) for x in self.point],
            "corank": self.corank,
            "multiplicity": self.multiplicity,
            "kind": self.kind,
        }


@dataclass
class PattersonReport:
    graph_id: str
    samples: list[PattersonSample] = field(default_factory=list)
    diagnostic: str = ""

    @property
    def all_match(self) -> bool:
        return all(s.match for s in self.samples)

    @property
    def mismatches(self) -> int:
        return sum(not s.match for s in self.samples)

    def to_json(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "n_samples": len(self.samples),
            "all_match": self.all_match,
            "mismatches": self.mismatches,
            "max_corank": max((s.corank for s in self.samples), default=0),
            "diagnostic": self.diagnostic,
            "samples": [s.to_json() for s in self.samples],
        }


def _rand_rational(rng: np.random.Generator, height: int, zero_prob: float = 0.0) -> Fraction:
    if zero_prob and rng.random() < zero_prob:
        return Fraction(0)
    num = int(rng.integers(-height, height + 1))
    while num == 0:
        num = int(rng.integers(-height, height + 1))
    return Fraction(num, int(rng.integers(1, height + 1)))


def _hypersurface_point(psi: MultiPoly, n: int, rng, height: int) -> list[Fraction] | None:
    """Random exact point of psi = 0, solving the (linear) equation in one coordinate."""
    for _ in range(8 * n):
        pivot = int(rng.integers(n))
        others = [_rand_rational(rng, height, zero_prob=0.2) for _ in range(n)]
        var = psi.variables[pivot]
        slope = psi.diff(var).evaluate(others)
        const = psi.subs(var, 0).evaluate(others)
        if slope:
            others[pivot] = -const / slope
        elif const == 0:
            others[pivot] = _rand_rational(rng, height)
        else:
            continue
        if any(others):
            return others
    return None


def _kernel_point(c: Configuration, k: int, rng, height: int) -> list[Fraction] | None:
    """Point a with k chosen vectors in ker(M_a): linear conditions on a."""
    g, n = c.genus, c.n_edges
    for _ in range(10):
        betas = []
        for _ in range(k):
            beta = [Fraction(int(rng.integers(-2, 3))) if rng.random() < 0.6 else Fraction(0) for _ in range(g)]
            if not any(beta):
                beta[int(rng.integers(g))] = Fraction(1)
            betas.append(beta)
        if linalg.rank(betas) < k:
            continue
        rows = []
        for beta in betas:
            dots = [sum((c.basis[i][e] * beta[i] for i in range(g)), Fraction(0)) for e in range(n)]
            for i in range(g):
                rows.append([c.basis[i][e] * dots[e] for e in range(n)])
        null = linalg.nullspace(rows, n)
        if not null:
            continue
        weights = [_rand_rational(rng, height) for _ in null]
        a = [sum((w * v[e] for w, v in zip(weights, null)), Fraction(0)) for e in range(n)]
        if any(a):
            return a
    return None


def patterson_scan(c: Configuration, n_samples: int, seed: int = 0, height: int = 5,
                   graph_id: str = "") -> PattersonReport:
    """Compare corank and multiplicity at sampled exact points of psi = 0.

    Even-indexed samples solve psi = 0 for one coordinate; odd-indexed ones
    force a prescribed kernel dimension (cycling 1..g) to reach deeper
    strata.  Each sample draws from its own seed-derived stream.
    """
    report = PattersonReport(graph_id=graph_id)
    psi = first_symanzik(c)
    if psi.total_degree() <= 0:
        report.diagnostic = "X_G empty: psi is a nonzero constant"
        return report
    streams = np.random.SeedSequence(seed).spawn(n_samples)
    for idx, ss in enumerate(streams):
        rng = np.random.default_rng(ss)
        point, kind = None, "hypersurface"
        if idx % 2 == 1 and c.genus >= 1:
            k = 1 + (idx // 2) % c.genus
            point = _kernel_point(c, k, rng, height)
            kind = f"kernel{k}"
        if point is None:
            point, kind = _hypersurface_point(psi, c.n_edges, rng, height), "hypersurface"
        if point is None:
            continue
        report.samples.append(
            PattersonSample(tuple(point), corank_at(c, point), multiplicity_at(c, point, psi), kind)
        )
    if not report.samples:
        report.diagnostic = "no points found on X_G"
    return report


# -- the incidence variety over P^{g-1} -------------------------------------------


def epsilon_beta(c: Configuration, beta: Sequence) -> int:
    """g minus the rank of the functionals e^v with e^v(beta) != 0."""
    beta = [Fraction(x) for x in beta]
    if len(beta) != c.genus:
        raise ValueError(f"beta must have length g = {c.genus}")
    if not any(beta):
        raise ValueError("beta must be nonzero")
    live = []
    for e in range(c.n_edges):
        col = c.column(e)
        if sum((x * b for x, b in zip(col, beta)), Fraction(0)):
            live.append(list(col))
    return c.genus - (linalg.rank(live) if live else 0)


def fibre_dimension(c: Configuration, beta: Sequence) -> int:
    return c.n_edges - c.genus - 1 + epsilon_beta(c, beta)


@dataclass(frozen=True)
class LoopPartition:
    first: tuple[int, ...]
    second: tuple[int, ...]
    witness_first: tuple[int, ...]  # beta killed by every e^v in ``first``
    witness_second: tuple[int, ...]


def _span_rank(c: Configuration, edges: Sequence[int]) -> int:
    cols = [list(c.column(e)) for e in edges]
    return linalg.rank(cols) if cols else 0


def _annihilator(c: Configuration, edges: Sequence[int]) -> tuple[int, ...]:
    cols = [list(c.column(e)) for e in edges]
    null = linalg.nullspace(cols, c.genus) if cols else linalg.nullspace([], c.genus)
    return linalg.primitive_integer(null[0])


def _as_configuration(c: Configuration | Graph) -> Configuration:
    return Configuration.from_graph(c) if isinstance(c, Graph) else c


def loop_partitions(c: Configuration | Graph) -> list[LoopPartition]:
    """Unordered partitions E = E' u E'' where neither side spans H^1."""
    c = _as_configuration(c)
    n, g = c.n_edges, c.genus
    if g == 0:
        return []
    out = []
    for mask in range(1 << (n - 1)):
        # the last edge always sits in the second part, so each partition appears once
        first = tuple(e for e in range(n) if mask >> e & 1)
        second = tuple(e for e in range(n) if not mask >> e & 1)
        if _span_rank(c, first) < g and _span_rank(c, second) < g:
            out.append(LoopPartition(first, second, _annihilator(c, first), _annihilator(c, second)))
    return out


@dataclass
class JumpLocus:
    points: list[tuple[int, ...]]
    epsilons: list[int]
    positive_dimensional: list[tuple[int, ...]]  # closed edge sets with a jumping linear family

    @property
    def is_finite(self) -> bool:
        return not self.positive_dimensional


def jump_locus(c: Configuration | Graph) -> JumpLocus:
    """All beta in P^{g-1} with epsilon(beta) > 0, by exact solving over edge subsets.

    For a subset S of edges, the generic beta annihilated by S is killed
    exactly by the closure of S (edges whose functional lies in span S).  A
    jump there means the complement of the closure fails to span.
    """
    c = _as_configuration(c)
    n, g = c.n_edges, c.genus
    points: dict[tuple[int, ...], int] = {}
    families: set[tuple[int, ...]] = set()
    seen: set[tuple[int, ...]] = set()
    for size in range(1, n + 1):
        for subset in itertools.combinations(range(n), size):
            r = _span_rank(c, subset)
            if r == 0 or r >= g:
                continue
            closure = tuple(e for e in range(n) if _span_rank(c, subset + (e,)) == r)
            if closure in seen:
                continue
            seen.add(closure)
            rest = [e for e in range(n) if e not in closure]
            eps = g - _span_rank(c, rest)
            if eps <= 0:
                continue
            if r == g - 1:
                beta = _annihilator(c, closure)
                points[beta] = epsilon_beta(c, beta)
            else:
                families.add(closure)
    ordered = sorted(points)
    return JumpLocus(ordered, [points[p] for p in ordered], sorted(families))
