"""Command-line entry point: ``feyngraph <subcommand> ...`` (JSON on stdout, tables on stderr)."""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import sys
from fractions import Fraction

from . import __version__

EXIT_OK, EXIT_BUG, EXIT_INVALID = 0, 1, 2

log = logging.getLogger("feyngraph")


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _json_arg(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise argparse.ArgumentTypeError(f"invalid JSON: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="feyngraph", description="Graph polynomials and parametric amplitudes.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=1, help="cap on worker threads")
    common.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="subcommand", required=True)

    s = sub.add_parser("symanzik", parents=[common], help="print psi and phi")
    s.add_argument("--graph", required=True, help="graph JSON file or corpus name")
    s.add_argument("--method", choices=["determinant", "spanning_tree"], default="determinant")

    h = sub.add_parser("hypersurface", parents=[common], help="Patterson scan on psi = 0")
    h.add_argument("--graph", required=True)
    h.add_argument("--samples", type=int, default=100)
    h.add_argument("--jump-locus", action="store_true", help="also list loop partitions and the jump locus")

    a = sub.add_parser("amplitude", parents=[common], help="Euclidean parametric integral")
    a.add_argument("--graph", required=True)
    a.add_argument("--dimension", type=int, required=True)
    a.add_argument("--method", choices=["plain_mc", "stratified", "quadrature"], default="plain_mc")
    a.add_argument("--samples", type=int, default=100_000)

    t = sub.add_parser("tension-limit", parents=[common], help="alpha' -> 0 limit of heights")
    t.add_argument("--graph", required=True)
    t.add_argument("--Y", type=_floats, required=True, help="comma-separated positive edge values")
    t.add_argument("--alpha-schedule", type=_floats, default=None)
    t.add_argument("--delta", type=_json_arg, default=None, help='vertex divisor, e.g. \'{"1": 1, "2": -1}\'')
    t.add_argument("--mu", type=_json_arg, default=None)
    t.add_argument("--base-scale", type=float, default=0.0,
                   help="imaginary size of the boundary point; 0 keeps the exact zero base")

    lnd = sub.add_parser("landau", parents=[common], help="physical pinches with all edges on shell")
    lnd.add_argument("--graph", required=True)
    lnd.add_argument("--masses", type=_floats, default=None)
    lnd.add_argument("--external", type=_json_arg, default=None, help='vertex momenta, e.g. \'{"1": [2, 0], "2": [-2, 0]}\'')
    lnd.add_argument("--starts", type=int, default=20)

    c = sub.add_parser("corpus", parents=[common], help="built-in graphs")
    c.add_argument("--verify", action="store_true", help="run the invariant suite")
    c.add_argument("--samples", type=int, default=20, help="Patterson samples per graph")
    return p


class _Invalid(Exception):
    pass


def _load(ref: str, signature=None, mass_sign: int = -1, need_kin: bool = True):
    from .graphio import ValidationError, graph_hash, load_document, parse_graph, parse_kinematics

    doc, _ = load_document(ref)
    g = parse_graph(doc)
    kin = parse_kinematics(doc, g, signature, mass_sign) if need_kin else None
    return doc, g, kin, graph_hash(doc)


def _exact(x):
    return str(x) if isinstance(x, Fraction) else x


def cmd_symanzik(args) -> dict:
    from .amplitude import amplitude_phi
    from .symanzik import Configuration, first_symanzik, second_symanzik

    doc, g, kin, gh = _load(args.graph)
    c = Configuration.from_graph(g)
    psi = first_symanzik(c, method=args.method)
    out = {"graph_hash": gh, "psi": psi.to_text(), "genus": c.genus, "n_edges": c.n_edges, "psi_degree": psi.total_degree()}
    if g.is_connected():
        phi = second_symanzik(c, kin.momenta)
        out["phi"] = phi.to_text()
        out["phi_degree"] = phi.total_degree()
        if any(kin.masses):
            out["phi_massive"] = amplitude_phi(g, kin).to_text()
    return out


def cmd_hypersurface(args) -> dict:
    from .hypersurface import jump_locus, loop_partitions, patterson_scan
    from .symanzik import Configuration

    doc, g, _, gh = _load(args.graph, need_kin=False)
    if args.samples < 0:
        raise _Invalid("--samples must be nonnegative")
    c = Configuration.from_graph(g)
    out = {"graph_hash": gh, "report": patterson_scan(c, args.samples, args.seed, graph_id=args.graph).to_json()}
    if args.jump_locus:
        parts = loop_partitions(c)
        jl = jump_locus(c)
        out["loop_partitions"] = [[list(p.first), list(p.second)] for p in parts]
        out["jump_points"] = [list(p) for p in jl.points]
        out["jump_epsilons"] = jl.epsilons
        out["jump_locus_finite"] = jl.is_finite
    return out


def cmd_amplitude(args) -> dict:
    from .amplitude import integrate_simplex, parametric_integrand

    doc, g, kin, gh = _load(args.graph, mass_sign=1)
    if not kin.space.is_euclidean:
        raise _Invalid("amplitude integrals are Euclidean; drop the signature field")
    if args.samples <= 0:
        raise _Invalid("--samples must be positive")
    integrand = parametric_integrand(g, args.dimension, kin)
    est = integrate_simplex(integrand, args.method, args.samples, args.seed, workers=args.threads)
    pref = integrand.prefactor()
    return {
        "graph_hash": gh,
        "value": est.value,
        "std_error": est.std_error,
        "n_samples": est.n_samples,
        "method": est.method,
        "converged": est.converged,
        "exponents": integrand.exponents(),
        "log_divergent": integrand.log_divergent,
        "prefactor": pref if math.isfinite(pref) else None,
    }


def cmd_tension(args) -> dict:
    from .degeneration import DEFAULT_SCHEDULE, orbit_data_from_graph, reference_base, tension_limit

    doc, g, kin, gh = _load(args.graph)
    if len(args.Y) != g.n_edges:
        raise _Invalid(f"--Y needs {g.n_edges} values")
    default = {str(v): kin.momenta.at(v)[0] for v in g.vertices}
    delta = {v: Fraction(str((args.delta or default).get(str(v), 0))) for v in g.vertices}
    mu = {v: Fraction(str((args.mu or default).get(str(v), 0))) for v in g.vertices}
    if args.base_scale < 0:
        raise _Invalid("--base-scale must be nonnegative")
    base = reference_base(g.loop_number, args.base_scale) if args.base_scale > 0 else None
    d = orbit_data_from_graph(g, delta, mu, base)
    res = tension_limit(d, args.Y, args.alpha_schedule or DEFAULT_SCHEDULE)
    out = res.to_json()
    out["graph_hash"] = gh
    return out


def cmd_landau(args) -> dict:
    from .amplitude import Kinematics
    from .graphio import parse_number
    from .landau import find_physical_pinch, hessian_check
    from .symanzik import MomentumVector, QuadraticSpace

    doc, g, kin, gh = _load(args.graph)
    if args.external is not None:
        if not isinstance(args.external, dict):
            raise _Invalid("--external must be a JSON object")
        lookup = {str(v): v for v in g.vertices}
        vecs = {}
        for k, v in args.external.items():
            if str(k) not in lookup:
                raise _Invalid(f"unknown vertex {k!r} in --external")
            vecs[lookup[str(k)]] = tuple(parse_number(x) for x in (v if isinstance(v, list) else [v]))
        dim = len(next(iter(vecs.values()))) if vecs else 1
        space = QuadraticSpace.minkowski(dim) if dim > 1 else QuadraticSpace.euclidean(1)
        momenta = MomentumVector(vecs, space)
    else:
        momenta = kin.momenta
    masses = args.masses if args.masses is not None else [float(m) for m in kin.masses]
    if len(masses) != g.n_edges:
        raise _Invalid(f"--masses needs {g.n_edges} values")
    kin = Kinematics(momenta, tuple(parse_number(m) for m in masses))
    pinches = find_physical_pinch(g, kin, seed=args.seed, n_starts=args.starts)
    reports = []
    for p in pinches:
        hess = None
        if kin.space.is_minkowski and all(m > 0 for m in masses):
            hess = hessian_check(p, g, kin).to_json()
        entry = p.to_json()
        if hess is not None:
            entry["hessian"] = hess
        reports.append(entry)
    return {"graph_hash": gh, "pinches": reports}


def cmd_corpus(args) -> dict:
    from .graphio import CORPUS, graph_hash
    from .verify import format_table, run_corpus_checks

    out = {"graph_hash": graph_hash(CORPUS), "graphs": sorted(CORPUS)}
    if args.verify:
        results = run_corpus_checks(patterson_samples=args.samples, seed=args.seed)
        print(format_table(results), file=sys.stderr)
        out["checks"] = [r.to_json() for r in results]
        out["all_passed"] = all(r.passed for r in results)
    return out


COMMANDS = {
    "symanzik": cmd_symanzik,
    "hypersurface": cmd_hypersurface,
    "amplitude": cmd_amplitude,
    "tension-limit": cmd_tension,
    "landau": cmd_landau,
    "corpus": cmd_corpus,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr)
    if args.threads < 1:
        print("error: --threads must be at least 1", file=sys.stderr)
        return EXIT_INVALID
    os.environ["FEYNGRAPH_THREADS"] = str(args.threads)
    from .graph import GraphError
    from .graphio import ValidationError

    try:
        report = COMMANDS[args.subcommand](args)
    except (_Invalid, ValidationError, GraphError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:  # noqa: BLE001 - anything else is a bug; keep the traceback
        log.exception("internal error")
        return EXIT_BUG
    report.update({"tool_version": __version__, "seed": args.seed, "subcommand": args.subcommand})
    print(json.dumps(report, sort_keys=True, default=_exact))
    if args.subcommand == "corpus" and not report.get("all_passed", True):
        return EXIT_BUG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
