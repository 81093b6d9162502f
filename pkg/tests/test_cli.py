import json
import subprocess
import sys

import pytest

from feyngraph import __version__
from feyngraph.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_symanzik_bubble(capsys):
    code, rep, _ = run(capsys, "symanzik", "--graph", "bubble")
    assert code == 0
    assert rep["psi"] == "A1 + A2" and rep["phi"] == "A1*A2"
    assert rep["seed"] == 0 and rep["tool_version"] == __version__ and rep["subcommand"] == "symanzik"
    assert len(rep["graph_hash"]) == 64


def test_symanzik_methods_same_output(capsys):
    _, a, _ = run(capsys, "symanzik", "--graph", "wheel3")
    _, b, _ = run(capsys, "symanzik", "--graph", "wheel3", "--method", "spanning_tree")
    assert a["psi"] == b["psi"]


def test_symanzik_from_file(capsys, tmp_path):
    f = tmp_path / "t.json"
    f.write_text(json.dumps({"vertices": [1, 2, 3], "edges": [[1, 2], [2, 3], [3, 1]],
                             "momenta": {"1": ["1/2"], "2": ["-1/2"]}}))
    code, rep, _ = run(capsys, "symanzik", "--graph", str(f))
    assert code == 0 and rep["psi"] == "A1 + A2 + A3"


def test_hypersurface_jump_locus(capsys):
    code, rep, _ = run(capsys, "hypersurface", "--graph", "wheel4", "--samples", "10", "--seed", "3", "--jump-locus")
    assert code == 0 and rep["seed"] == 3
    assert rep["report"]["all_match"] and len(rep["jump_points"]) == 4 and rep["jump_locus_finite"]


def test_amplitude_deterministic(capsys):
    args = ("amplitude", "--graph", "bubble", "--dimension", "2", "--samples", "20000", "--seed", "5")
    _, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args, "--threads", "3")
    assert a == b
    assert a["value"] == pytest.approx(0.8608, abs=0.01)


def test_amplitude_quadrature(capsys):
    code, rep, _ = run(capsys, "amplitude", "--graph", "bubble", "--dimension", "2", "--method", "quadrature", "--samples", "64")
    assert code == 0 and rep["value"] == pytest.approx(0.8608178819280082, rel=1e-10)


def test_tension_limit(capsys):
    code, rep, _ = run(capsys, "tension-limit", "--graph", "triangle", "--Y", "1,2,3", "--base-scale", "0.1")
    assert code == 0
    assert rep["kappa"] == pytest.approx(-6.283185307179586, rel=1e-8)
    assert rep["error_slope"] == pytest.approx(1.0, abs=0.1)


def test_landau_banana(capsys):
    code, rep, _ = run(capsys, "landau", "--graph", "bubble", "--external", '{"1": [2, 0], "2": [-2, 0]}', "--masses", "1,1")
    assert code == 0 and len(rep["pinches"]) == 1
    assert rep["pinches"][0]["hessian"]["verdict"] == "negative-definite"


def test_corpus_listing(capsys):
    code, rep, _ = run(capsys, "corpus")
    assert code == 0 and "wheel4" in rep["graphs"]


@pytest.mark.parametrize(
    "argv",
    [
        ("symanzik", "--graph", "nonexistent"),
        ("amplitude", "--graph", "bubble", "--dimension", "2", "--samples", "0"),
        ("tension-limit", "--graph", "bubble", "--Y", "1"),
        ("landau", "--graph", "bubble", "--masses", "1"),
        ("symanzik", "--graph", "bubble", "--threads", "0"),
    ],
)
def test_invalid_input_exit_2(capsys, argv):
    code, rep, err = run(capsys, *argv)
    assert code == 2 and rep is None and "error" in err


def test_malformed_json_exit_2(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text("{not json")
    code, _, _ = run(capsys, "symanzik", "--graph", str(f))
    assert code == 2


def test_unknown_flag_rejected(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["symanzik", "--graph", "bubble", "--bogus"])
    assert exc.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "feyngraph", "symanzik", "--graph", "triangle"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["psi"] == "A1 + A2 + A3"
