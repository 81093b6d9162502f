"""Invariant suite over the built-in corpus (backs ``corpus --verify``)."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .amplitude import Kinematics, amplitude_phi, quotient_metric
from .graph import Graph, laplacian, modify, spanning_trees
from .graphio import CORPUS, corpus_graph
from .hypersurface import patterson_scan
from .symanzik import Configuration, MomentumVector, QuadraticSpace, first_symanzik, graph_psi


@dataclass
class CheckResult:
    graph: str
    check: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"graph": self.graph, "check": self.check, "passed": self.passed, "detail": self.detail}


def matrix_tree_count(g: Graph) -> int:
    lap = laplacian(g)
    if g.n_vertices == 1:
        return 1
    reduced = [row[1:] for row in lap[1:]]
    return int(linalg.det(reduced))


def deletion_contraction_failures(g: Graph) -> list[str]:
    """Edges where the cut/shrink identities fail (bridges use d psi/dA_e = 0)."""
    psi = graph_psi(g)
    bad = []
    for e in g.edges:
        name = g.edge_names[e]
        dpsi = psi.diff(name)
        at_zero = psi.subs(name, 0)
        cut = graph_psi(modify(g, e, "delete"))
        if g.is_tadpole(e):
            if not at_zero.is_zero():
                bad.append(f"{name}: tadpole restriction nonzero")
            if dpsi != cut:
                bad.append(f"{name}: cut")
            continue
        if g.is_bridge(e):
            if not dpsi.is_zero():
                bad.append(f"{name}: bridge derivative nonzero")
        elif dpsi != cut:
            bad.append(f"{name}: cut")
        if at_zero != graph_psi(modify(g, e, "contract")):
            bad.append(f"{name}: shrink")
    return bad


def random_kinematics(g: Graph, rng: random.Random, dim: int = 2, height: int = 4) -> Kinematics:
    space = QuadraticSpace.euclidean(dim)
    verts = list(g.vertices)
    vals = {v: [Fraction(rng.randint(-height, height), rng.randint(1, height)) for _ in range(dim)] for v in verts[:-1]}
    vals[verts[-1]] = [-sum((vals[v][k] for v in verts[:-1]), Fraction(0)) for k in range(dim)]
    return Kinematics(MomentumVector({v: tuple(p) for v, p in vals.items()}, space), (0,) * g.n_edges)


def quotient_identity_failures(g: Graph, trials: int, seed: int) -> int:
    rng = random.Random(seed)
    psi = graph_psi(g)
    bad = 0
    for _ in range(trials):
        kin = random_kinematics(g, rng)
        a = [Fraction(rng.randint(1, 9), rng.randint(1, 9)) for _ in g.edges]
        phi = amplitude_phi(g, kin)
        if quotient_metric(g, a, kin) * psi.evaluate(a) != phi.evaluate(a):
            bad += 1
    return bad


def run_corpus_checks(names=None, patterson_samples: int = 20, seed: int = 0) -> list[CheckResult]:
    names = list(names or CORPUS)
    out: list[CheckResult] = []
    for name in names:
        g = corpus_graph(name)
        c = Configuration.from_graph(g)
        det_psi = first_symanzik(c)
        tree_psi = first_symanzik(c, method="spanning_tree")
        out.append(CheckResult(name, "psi_methods_agree", det_psi == tree_psi))
        trees, oracle = len(spanning_trees(g)), matrix_tree_count(g)
        out.append(CheckResult(name, "spanning_tree_count", trees == oracle, f"{trees} vs {oracle}"))
        bad = deletion_contraction_failures(g)
        for e in g.edges:
            h = modify(g, e, "contract")
            bad += [f"contract {g.edge_names[e]} / {m}" for m in deletion_contraction_failures(h)]
        out.append(CheckResult(name, "deletion_contraction", not bad, "; ".join(bad)))
        coefficients_one = all(v == 1 for v in det_psi.terms.values())
        out.append(CheckResult(name, "psi_coefficients_one", coefficients_one))
        if c.genus >= 1:
            rep = patterson_scan(c, patterson_samples, seed=seed, graph_id=name)
            out.append(CheckResult(name, "patterson", rep.all_match, f"{len(rep.samples)} samples"))
        bad_q = quotient_identity_failures(g, 3, seed)
        out.append(CheckResult(name, "quotient_metric_identity", bad_q == 0, f"{bad_q} failures"))
    return out


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.graph) for r in results) if results else 5
    lines = [f"{'graph':<{width}}  {'check':<26}  result"]
    for r in results:
        lines.append(f"{r.graph:<{width}}  {r.check:<26}  {'PASS' if r.passed else 'FAIL'} {r.detail}".rstrip())
    return "\n".join(lines)
