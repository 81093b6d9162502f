"""Graph JSON documents, the built-in corpus, and provenance hashes."""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .amplitude import Kinematics
from .graph import Graph, GraphError, build_graph
from .symanzik import MomentumVector, QuadraticSpace


class ValidationError(ValueError):
    """Input document is malformed or violates a precondition."""


# wheel4 is the 4-spoke wheel: rim 1-2-3-4-1, hub 5
CORPUS_JSON = """
{
  "bubble":        {"vertices": [1, 2], "edges": [[1, 2], [1, 2]]},
  "triangle":      {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3], [3, 1]]},
  "banana3":       {"vertices": [1, 2], "edges": [[1, 2], [1, 2], [1, 2]]},
  "banana4":       {"vertices": [1, 2], "edges": [[1, 2], [1, 2], [1, 2], [1, 2]]},
  "banana5":       {"vertices": [1, 2], "edges": [[1, 2], [1, 2], [1, 2], [1, 2], [1, 2]]},
  "double_bubble": {"vertices": [1, 2, 3], "edges": [[1, 2], [1, 2], [2, 3], [2, 3]]},
  "wheel3":        {"vertices": [1, 2, 3, 4],
                    "edges": [[1, 2], [2, 3], [3, 1], [1, 4], [2, 4], [3, 4]]},
  "wheel4":        {"vertices": [1, 2, 3, 4, 5],
                    "edges": [[1, 2], [2, 3], [3, 4], [4, 1], [1, 5], [2, 5], [3, 5], [4, 5]]},
  "chain3":        {"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3]]},
  "chain4":        {"vertices": [1, 2, 3, 4], "edges": [[1, 2], [2, 3], [3, 4]]},
  "chain5":        {"vertices": [1, 2, 3, 4, 5], "edges": [[1, 2], [2, 3], [3, 4], [4, 5]]},
  "chain6":        {"vertices": [1, 2, 3, 4, 5, 6], "edges": [[1, 2], [2, 3], [3, 4], [4, 5], [5, 6]]}
}
"""

CORPUS: dict[str, dict] = json.loads(CORPUS_JSON)


def corpus_graph(name: str) -> Graph:
    if name not in CORPUS:
        raise KeyError(f"unknown corpus graph {name!r}; have {sorted(CORPUS)}")
    return parse_graph(CORPUS[name])


def corpus_document(name: str) -> dict:
    """Corpus entry completed with unit masses and a unit momentum from first to last vertex."""
    doc = dict(CORPUS[name])
    verts = doc["vertices"]
    doc.setdefault("masses", [1] * len(doc["edges"]))
    doc.setdefault("momenta", {str(verts[0]): [1], str(verts[-1]): [-1]})
    return doc


def parse_number(x) -> Fraction | float:
    """Exact for integers and "p/q" strings; binary floats are kept exact as well."""
    if isinstance(x, bool):
        raise ValidationError(f"expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x.strip())
        except ValueError:
            raise ValidationError(f"cannot parse number {x!r}") from None
    raise ValidationError(f"expected a number, got {x!r}")


def parse_graph(doc: dict) -> Graph:
    if not isinstance(doc, dict):
        raise ValidationError("graph document must be a JSON object")
    edges = doc.get("edges")
    if not isinstance(edges, list):
        raise ValidationError("'edges' must be a list of [u, v] pairs")
    try:
        return build_graph([tuple(e) for e in edges], vertices=doc.get("vertices"))
    except (GraphError, TypeError) as exc:
        raise ValidationError(str(exc)) from None


def _vertex_lookup(g: Graph) -> dict[str, object]:
    return {str(v): v for v in g.vertices}


def parse_kinematics(doc: dict, g: Graph, signature=None, mass_sign: int = -1) -> Kinematics:
    lookup = _vertex_lookup(g)
    raw = doc.get("momenta") or {}
    if not isinstance(raw, dict):
        raise ValidationError("'momenta' must map vertex ids to vectors")
    momenta = {}
    for key, vec in raw.items():
        if str(key) not in lookup:
            raise ValidationError(f"momentum given for unknown vertex {key!r}")
        if not isinstance(vec, list):
            vec = [vec]
        momenta[lookup[str(key)]] = tuple(parse_number(x) for x in vec)
    dims = {len(v) for v in momenta.values()}
    if len(dims) > 1:
        raise ValidationError("momentum vectors have different dimensions")
    D = dims.pop() if dims else 1
    if signature is None:
        signature = doc.get("signature") or [1] * D
    try:
        space = QuadraticSpace(tuple(signature))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None
    if space.dim != D and momenta:
        raise ValidationError(f"signature has dimension {space.dim} but momenta have {D}")
    masses = doc.get("masses")
    if masses is None:
        masses = [0] * g.n_edges
    if not isinstance(masses, list) or len(masses) != g.n_edges:
        raise ValidationError(f"'masses' must list one value per edge ({g.n_edges})")
    try:
        return Kinematics(MomentumVector(momenta, space), tuple(parse_number(m) for m in masses), mass_sign)
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def load_document(ref: str) -> tuple[dict, str]:
    """Read a graph document from a path, or take a corpus entry by name."""
    path = Path(ref)
    if path.is_file():
        try:
            return json.loads(path.read_text()), str(path)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed JSON in {ref}: {exc}") from None
    if ref in CORPUS:
        return corpus_document(ref), ref
    raise ValidationError(f"no graph file or corpus entry named {ref!r}")


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), default=str)


def graph_hash(doc: dict) -> str:
    return hashlib.sha256(canonical_json(doc).encode()).hexdigest()
