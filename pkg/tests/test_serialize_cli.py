import json
import random

import pytest

from ilpk import (canonicalize, gen_hitting_set, gen_or_composition, gen_random_protrusion,
                  gen_subset_sum, parse_instance, serialize_instance)
from ilpk.cli import main
from ilpk.errors import ParseError

from helpers import random_bounded_width_ilp


MINIMAL = {
    "format_version": 1,
    "variables": [{"name": "x", "lo": 0, "hi": 1}],
    "constraints": [{"coeffs": {"x": 1}, "rel": "<=", "rhs": 0}],
}


def test_parse_minimal_document():
    ilp, certs = parse_instance(json.dumps(MINIMAL))
    assert ilp.n == 1 and ilp.m == 1 and certs == {}


def test_serialize_parse_roundtrip_is_canonicalization():
    raw = json.dumps(MINIMAL).encode()
    ilp, certs = parse_instance(raw)
    assert serialize_instance(ilp, certs) == canonicalize(raw)


@pytest.mark.parametrize("mutate, fragment", [
    (lambda d: d.update(format_version=2), "format_version"),
    (lambda d: d["variables"].append({"name": "x", "lo": 0, "hi": 1}), "duplicate"),
    (lambda d: d["variables"].append({"name": "y", "lo": 2, "hi": 1}), "empty domain"),
    (lambda d: d["constraints"].append({"coeffs": {"z": 1}, "rel": "<=", "rhs": 0}),
     "undeclared"),
    (lambda d: d["constraints"].append({"coeffs": {"x": 0}, "rel": "<=", "rhs": 0}),
     "zero coefficient"),
    (lambda d: d["constraints"].append({"coeffs": {"x": 1}, "rel": "<<", "rhs": 0}),
     "rel"),
    (lambda d: d.update(junk=1), "unknown"),
])
def test_parse_diagnostics(mutate, fragment):
    doc = json.loads(json.dumps(MINIMAL))
    mutate(doc)
    with pytest.raises(ParseError) as err:
        parse_instance(json.dumps(doc))
    assert fragment in str(err.value)


def test_generator_outputs_roundtrip():
    cases = []
    ss = gen_subset_sum([2, 7, 9], 11)
    cases.append((ss[0], {"tree_decomposition": ss[1]}))
    hs = gen_hitting_set(2, [[0], [0, 1]], 1)
    cases.append((hs[0], {"tu_modified_entries": hs[1]}))
    oc = gen_or_composition([(2, [(0, 1)]), (2, [])], 1)
    cases.append((oc[0], {"protrusion_decomposition": oc[1]}))
    rp = gen_random_protrusion(3, 2, 2, 2, seed=5)
    cases.append((rp[0], {"protrusion_decomposition": rp[1]}))
    for ilp, certs in cases:
        data = serialize_instance(ilp, certs)
        ilp2, certs2 = parse_instance(data)
        assert ilp2 == ilp
        assert serialize_instance(ilp2, certs2) == data


def test_roundtrip_random_instances():
    rng = random.Random(81)
    for _ in range(30):
        ilp = random_bounded_width_ilp(rng, n_max=6)
        data = serialize_instance(ilp)
        ilp2, _ = parse_instance(data)
        assert ilp2 == ilp
        assert serialize_instance(ilp2) == data


# ---------------------------------------------------------------------------
# CLI


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_generate_solve_feasible(tmp_path, capsys):
    path = tmp_path / "ss.json"
    code, _, _ = run_cli(capsys, "generate", "subset-sum", "--items", "3,5,8",
                         "--target", "11", "-o", str(path))
    assert code == 0
    code, out, _ = run_cli(capsys, "solve", str(path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "feasible"
    witness = json.loads(lines[1])
    assert witness["y3"] == 11


def test_cli_solve_infeasible_exit_code(tmp_path, capsys):
    path = tmp_path / "ss.json"
    run_cli(capsys, "generate", "subset-sum", "--items", "3,5", "--target", "7",
            "-o", str(path))
    code, out, _ = run_cli(capsys, "solve", str(path))
    assert code == 1
    assert out.splitlines()[0] == "infeasible"


def test_cli_solve_with_modulator(tmp_path, capsys):
    g1 = tmp_path / "g1.txt"
    g1.write_text("3\n0 1\n1 2\n0 2\n")
    g2 = tmp_path / "g2.txt"
    g2.write_text("3\n0 1\n")
    inst = tmp_path / "oc.json"
    code, _, _ = run_cli(capsys, "generate", "or-composition", "--graphs",
                         f"{g1},{g2}", "--k", "2", "-o", str(inst))
    assert code == 0
    code, out, _ = run_cli(capsys, "solve", str(inst),
                           "--modulator", "x0,x1,x2,s")
    assert code == 0 and out.splitlines()[0] == "feasible"


def test_cli_kernelize_tw_preserves_verdict(tmp_path, capsys):
    src = tmp_path / "rp.json"
    red = tmp_path / "red.json"
    run_cli(capsys, "generate", "random", "--k", "3", "--r", "2", "--d", "2",
            "--parts", "2", "--seed", "3", "-o", str(src))
    code, _, err = run_cli(capsys, "kernelize", str(src), "--mode", "tw",
                           "-o", str(red))
    assert code == 0
    assert "variables:" in err
    v1, _, _ = run_cli(capsys, "solve", str(src))
    v2, _, _ = run_cli(capsys, "solve", str(red))
    assert v1 == v2


def test_cli_kernelize_tu(tmp_path, capsys):
    # network residual with one boundary variable
    doc = {
        "format_version": 1,
        "variables": [{"name": "b", "lo": 0, "hi": 2},
                      {"name": "u", "lo": 0, "hi": 2}],
        "constraints": [{"coeffs": {"b": 1, "u": -1}, "rel": "<=", "rhs": 0}],
        "certificates": {"boundary": ["b"]},
    }
    src = tmp_path / "tu.json"
    src.write_text(json.dumps(doc))
    out_path = tmp_path / "tu_red.json"
    code, _, err = run_cli(capsys, "kernelize", str(src), "--mode", "tu",
                           "-o", str(out_path))
    assert code == 0
    ilp2, certs2 = parse_instance(out_path.read_bytes())
    assert certs2["boundary"] == (0,)


def test_cli_kernelize_requires_certificate(tmp_path, capsys):
    src = tmp_path / "plain.json"
    src.write_text(json.dumps(MINIMAL))
    code, _, err = run_cli(capsys, "kernelize", str(src), "--mode", "tw")
    assert code == 2 and "protrusion_decomposition" in err


def test_cli_verify_ok_and_determinism(tmp_path, capsys):
    path = tmp_path / "rp.json"
    run_cli(capsys, "generate", "random", "--k", "3", "--r", "2", "--d", "2",
            "--parts", "2", "--seed", "8", "-o", str(path))
    first = path.read_bytes()
    run_cli(capsys, "generate", "random", "--k", "3", "--r", "2", "--d", "2",
            "--parts", "2", "--seed", "8", "-o", str(path))
    assert path.read_bytes() == first
    code, out, _ = run_cli(capsys, "verify", str(path))
    assert code == 0
    assert "ok   protrusion_decomposition" in out
    assert "ok   oracle-vs-dp" in out


def test_cli_verify_catches_broken_certificate(tmp_path, capsys):
    doc = {
        "format_version": 1,
        "variables": [{"name": "a", "lo": 0, "hi": 1},
                      {"name": "b", "lo": 0, "hi": 1}],
        "constraints": [{"coeffs": {"a": 1, "b": 1}, "rel": "<=", "rhs": 1}],
        "certificates": {"tree_decomposition": {
            "bags": [["a"], ["b"]], "edges": [[0, 1]], "root": 0}},
    }
    path = tmp_path / "broken.json"
    path.write_text(json.dumps(doc))
    code, out, _ = run_cli(capsys, "verify", str(path))
    assert code == 1
    assert "FAIL tree_decomposition" in out


def test_cli_analyze(tmp_path, capsys):
    path = tmp_path / "ss.json"
    run_cli(capsys, "generate", "subset-sum", "--items", "1,2,4", "--target", "5",
            "-o", str(path))
    code, out, _ = run_cli(capsys, "analyze", str(path))
    assert code == 0
    assert "treewidth (exact): 2" in out


def test_cli_hitting_set_generate_and_verify(tmp_path, capsys):
    path = tmp_path / "hs.json"
    code, _, _ = run_cli(capsys, "generate", "hitting-set", "--universe-size", "2",
                         "--sets", "0;1", "--k", "2", "-o", str(path))
    assert code == 0
    code, out, _ = run_cli(capsys, "verify", str(path))
    assert code == 0
    assert "ok   tu_modified_entries" in out


def test_cli_bad_file_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "solve", "/nonexistent/file.json")
    assert code == 2


def test_cli_pace_td_roundtrip(tmp_path, capsys):
    inst = tmp_path / "ss.json"
    td_file = tmp_path / "ss.td"
    run_cli(capsys, "generate", "subset-sum", "--items", "2,3,5", "--target", "8",
            "-o", str(inst))
    code, out, _ = run_cli(capsys, "analyze", str(inst), "--emit-td", str(td_file))
    assert code == 0 and td_file.exists()
    assert td_file.read_text().startswith("s td ")
    code, out, _ = run_cli(capsys, "solve", str(inst), "--td", str(td_file))
    assert code == 0 and out.splitlines()[0] == "feasible"


def test_cli_pace_td_vertex_mismatch(tmp_path, capsys):
    inst = tmp_path / "ss.json"
    td_file = tmp_path / "bad.td"
    run_cli(capsys, "generate", "subset-sum", "--items", "2,3", "--target", "5",
            "-o", str(inst))
    td_file.write_text("s td 1 1 2\nb 1 1 2\n")
    code, _, err = run_cli(capsys, "solve", str(inst), "--td", str(td_file))
    assert code == 2 and "declares 2 vertices" in err


def test_cli_kernelize_tu_preserves_solve_verdict(tmp_path, capsys):
    # the gadget is feasible iff its boundary set is nonempty iff the
    # original is feasible, so plain solve verdicts carry over
    feasible_doc = {
        "format_version": 1,
        "variables": [{"name": "b", "lo": 0, "hi": 2},
                      {"name": "u", "lo": 0, "hi": 1}],
        "constraints": [{"coeffs": {"b": 1, "u": -1}, "rel": "<=", "rhs": 0}],
        "certificates": {"boundary": ["b"]},
    }
    infeasible_doc = json.loads(json.dumps(feasible_doc))
    infeasible_doc["constraints"].append({"coeffs": {"b": 1}, "rel": ">=", "rhs": 5})
    for doc, expected in ((feasible_doc, 0), (infeasible_doc, 1)):
        src = tmp_path / "in.json"
        out = tmp_path / "out.json"
        src.write_text(json.dumps(doc))
        code, _, _ = run_cli(capsys, "kernelize", str(src), "--mode", "tu", "-o", str(out))
        assert code == 0
        v_src, _, _ = run_cli(capsys, "solve", str(src))
        v_out, _, _ = run_cli(capsys, "solve", str(out))
        assert v_src == v_out == expected


def test_cli_caps_env_roundtrip(tmp_path):
    import os
    import subprocess
    import sys
    inst = tmp_path / "rp.json"
    subprocess.run([sys.executable, "-m", "ilpk.cli", "generate", "random", "--k", "3",
                    "--r", "2", "--d", "2", "--parts", "2", "--seed", "4",
                    "-o", str(inst)], check=True)
    env = dict(os.environ, ILPK_CAPS="dp_cells=1")
    proc = subprocess.run([sys.executable, "-m", "ilpk.cli", "kernelize", str(inst),
                           "--mode", "tw", "-o", str(tmp_path / "red.json")],
                          env=env, capture_output=True, text=True)
    assert proc.returncode == 3
    assert "dp_cells" in proc.stderr

    bad = dict(os.environ, ILPK_CAPS="bogus=1")
    proc2 = subprocess.run([sys.executable, "-m", "ilpk.cli", "analyze", str(inst)],
                           env=bad, capture_output=True, text=True)
    assert proc2.returncode != 0


def test_cli_reads_stdin(tmp_path):
    import subprocess
    import sys
    data = json.dumps(MINIMAL).encode()
    proc = subprocess.run([sys.executable, "-m", "ilpk.cli", "solve", "-"],
                          input=data, capture_output=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == b"feasible"
