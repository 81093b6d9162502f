import json

import pytest

from feyngraph.graphio import (
    CORPUS,
    ValidationError,
    corpus_document,
    graph_hash,
    load_document,
    parse_graph,
    parse_kinematics,
    parse_number,
)
from feyngraph.verify import format_table, run_corpus_checks
from fractions import Fraction


def test_corpus_has_expected_graphs():
    assert {"bubble", "triangle", "wheel3", "wheel4", "double_bubble", "banana3", "chain3"} <= set(CORPUS)


def test_parse_number():
    assert parse_number("3/4") == Fraction(3, 4)
    assert parse_number(2) == 2 and parse_number(0.5) == Fraction(1, 2)
    for bad in ("x", True, None, [1]):
        with pytest.raises(ValidationError):
            parse_number(bad)


def test_parse_graph_errors():
    with pytest.raises(ValidationError):
        parse_graph({"edges": "nope"})
    with pytest.raises(ValidationError):
        parse_graph({"edges": [[1, 2, 3]]})
    with pytest.raises(ValidationError):
        parse_graph([1, 2])


def test_kinematics_validation():
    doc = corpus_document("bubble")
    g = parse_graph(doc)
    kin = parse_kinematics(doc, g)
    assert kin.masses == (1, 1) and kin.space.dim == 1
    with pytest.raises(ValidationError):
        parse_kinematics({**doc, "masses": [1]}, g)
    with pytest.raises(ValidationError):
        parse_kinematics({**doc, "momenta": {"1": [1], "2": [1]}}, g)
    with pytest.raises(ValidationError):
        parse_kinematics({**doc, "momenta": {"9": [1], "2": [-1]}}, g)
    with pytest.raises(ValidationError):
        parse_kinematics({**doc, "momenta": {"1": [1, 0], "2": [-1]}}, g)


def test_load_document_file_and_name(tmp_path):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"edges": [[1, 2], [1, 2]]}))
    doc, src = load_document(str(f))
    assert doc["edges"] == [[1, 2], [1, 2]]
    assert load_document("triangle")[0]["vertices"] == [1, 2, 3]
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ValidationError):
        load_document(str(bad))
    with pytest.raises(ValidationError):
        load_document("no_such_graph")


def test_hash_is_key_order_independent():
    assert graph_hash({"a": 1, "b": [1, 2]}) == graph_hash({"b": [1, 2], "a": 1})
    assert graph_hash({"a": 1}) != graph_hash({"a": 2})


def test_corpus_checks_all_pass():
    results = run_corpus_checks(patterson_samples=5)
    failed = [r for r in results if not r.passed]
    assert not failed, format_table(failed)
    assert "PASS" in format_table(results)
