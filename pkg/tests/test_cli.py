import json

import pytest

from seminil.cli import EX_HARDFAIL, EX_NOINPUT, EX_OK, EX_USAGE, main

JORDAN = {"vertices": ["0"], "arrows": [{"id": "a", "src": "0", "tgt": "0"}]}
G2 = {"vertices": ["0"], "arrows": [
    {"id": "a", "src": "0", "tgt": "0"}, {"id": "b", "src": "0", "tgt": "0"}]}
A2 = {"vertices": ["0", "1"], "arrows": [{"id": "a", "src": "0", "tgt": "1"}]}


@pytest.fixture
def quiver_files(tmp_path):
    paths = {}
    for name, doc in [("jordan", JORDAN), ("g2", G2), ("a2", A2)]:
        p = tmp_path / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def test_components_jordan_three_entries(quiver_files, capsys):
    code, out = run(capsys, ["components", "--quiver", quiver_files["jordan"], "--alpha", "3"])
    assert code == EX_OK
    doc = json.loads(out)
    assert len(doc["components"]) == 3
    assert doc["version"] and doc["config"]["command"] == "components"


def test_sample_certificate(quiver_files, capsys):
    code, out = run(capsys, [
        "sample", "--quiver", quiver_files["g2"], "--alpha", "3", "--label", "1,2", "--seed", "7",
    ])
    assert code == EX_OK
    doc = json.loads(out)
    cert = doc["certificate"]
    assert cert["mu_zero"] and cert["seminilpotent"]
    assert cert["w"] == [{"0": 1}, {"0": 2}]
    assert cert["delta"] == [0]


def test_verify_exit_zero(quiver_files, capsys):
    code, out = run(capsys, ["verify", "--quiver", quiver_files["g2"], "--alpha", "3", "--seed", "7"])
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["summary"]["fail"] == 0


def test_verify_table_format(quiver_files, capsys):
    code, out = run(capsys, [
        "verify", "--quiver", quiver_files["a2"], "--alpha", "1,1", "--format", "table",
    ])
    assert code == EX_OK
    assert "total:" in out


def test_basis_output(quiver_files, capsys):
    code, out = run(capsys, ["basis", "--quiver", quiver_files["jordan"], "--alpha", "2"])
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["order"] == [[2], [1, 1]]
    exprs = {tuple(e["w"]): e["expr"] for e in doc["basis"]}
    assert {"coeff": "-2", "word": [["0", 2]]} in exprs[(1, 1)]


def test_distinguish_identity(quiver_files, capsys):
    code, out = run(capsys, ["distinguish", "--quiver", quiver_files["a2"], "--alpha", "1,2"])
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["identity"] is True
    assert len(doc["functions"]) == 2


def test_graph_dot(quiver_files, capsys):
    code, out = run(capsys, ["graph", "--quiver", quiver_files["g2"], "--alpha", "2"])
    assert code == EX_OK
    assert out.startswith("digraph components {")


def test_euler_query(quiver_files, tmp_path, capsys):
    rep = {"alpha": {"0": 2}, "field": "Q",
           "entries": {"a": [["0", "0"], ["0", "0"]], "a_bar": [["1", "0"], ["0", "2"]]}}
    rep_path = tmp_path / "rep.json"
    rep_path.write_text(json.dumps(rep))
    code, out = run(capsys, [
        "euler", "--quiver", quiver_files["jordan"], "--rep", str(rep_path), "--word", "0:1,0:1",
    ])
    assert code == EX_OK
    assert json.loads(out)["chi"] == 2


def test_exit_codes(quiver_files, tmp_path, capsys):
    assert main(["nonsense"]) == EX_USAGE
    assert main([]) == EX_USAGE
    assert main(["components", "--quiver", str(tmp_path / "nope.json"), "--alpha", "1"]) == EX_NOINPUT
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["components", "--quiver", str(bad), "--alpha", "1"]) == EX_NOINPUT
    # alpha that does not parse
    assert main(["components", "--quiver", quiver_files["jordan"], "--alpha", "x"]) == EX_USAGE
    # label naming no component
    assert main([
        "sample", "--quiver", quiver_files["jordan"], "--alpha", "2", "--label", "3",
    ]) == EX_USAGE
    capsys.readouterr()


def test_output_file_and_determinism(quiver_files, tmp_path, capsys):
    out1 = tmp_path / "one.json"
    out2 = tmp_path / "two.json"
    argv = ["components", "--quiver", quiver_files["a2"], "--alpha", "1,2", "--seed", "5"]
    assert main(argv + ["--output", str(out1)]) == EX_OK
    assert main(argv + ["--output", str(out2)]) == EX_OK
    assert out1.read_bytes() == out2.read_bytes()
    capsys.readouterr()


def test_rerun_from_embedded_config(quiver_files, tmp_path, capsys):
    argv = ["sample", "--quiver", quiver_files["g2"], "--alpha", "2", "--label", "1,1", "--seed", "9"]
    code, out = run(capsys, argv)
    assert code == EX_OK
    config = json.loads(out)["config"]
    rebuilt = ["sample"]
    for key in ("quiver", "alpha", "seed", "bound", "retries", "n_seeds", "label", "format"):
        if key in config:
            flag = "--" + key.replace("_", "-")
            rebuilt += [flag, str(config[key])]
    code2, out2 = run(capsys, rebuilt)
    assert code2 == EX_OK
    assert out2 == out


def test_sample_by_catalog_index(quiver_files, capsys):
    code, out = run(capsys, [
        "sample", "--quiver", quiver_files["a2"], "--alpha", "1,2", "--index", "1", "--seed", "4",
    ])
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["certificate"]["mu_zero"] is True
    assert doc["config"]["index"] == 1


def test_primes_override_flows_through(quiver_files, tmp_path, capsys):
    rep = {"alpha": {"0": 2}, "field": "Q",
           "entries": {"a": [["0", "0"], ["0", "0"]], "a_bar": [["1", "0"], ["0", "2"]]}}
    rep_path = tmp_path / "rep.json"
    rep_path.write_text(json.dumps(rep))
    code, out = run(capsys, [
        "euler", "--quiver", quiver_files["jordan"], "--rep", str(rep_path),
        "--word", "0:1,0:1", "--primes", "5,7,11,13",
    ])
    assert code == EX_OK
    doc = json.loads(out)
    assert doc["chi"] == 2
    assert doc["config"]["primes"] == "5,7,11,13"


def test_env_var_default_seed(quiver_files, capsys, monkeypatch):
    monkeypatch.setenv("SEMINIL_SEED", "123")
    code, out = run(capsys, ["components", "--quiver", quiver_files["jordan"], "--alpha", "2"])
    assert code == EX_OK
    assert json.loads(out)["config"]["seed"] == 123
