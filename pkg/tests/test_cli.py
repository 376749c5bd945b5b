import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from signject.cli import main
from signject.ratmat import RationalMatrix

M = RationalMatrix
SCHEMA = json.loads(
    (Path(__file__).resolve().parent.parent / "docs" / "output.schema.json").read_text()
)


def run_cli(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    payload = json.loads(out) if out else None
    if payload is not None:
        jsonschema.validate(payload, SCHEMA)
    return code, payload, err


def write(tmp_path, name, matrix):
    p = tmp_path / name
    p.write_text(json.dumps(matrix.to_json_dict()))
    return str(p)


def test_injectivity_birch(tmp_path, capsys):
    A = M([[1, 2], [3, 4]])
    a = write(tmp_path, "A.json", A)
    b = write(tmp_path, "B.json", A.transpose())
    code, payload, err = run_cli(["injectivity", "--A", a, "--B", b, "--full-space"], capsys)
    assert code == 0
    assert payload["injective"] is True
    assert "HOLDS" in err


def test_injectivity_counterexample(tmp_path, capsys):
    a = write(tmp_path, "A.json", M([[1, -1]]))
    b = write(tmp_path, "B.json", M.identity(2))
    c = write(tmp_path, "C.json", M([[1], [1]]))
    code, payload, _ = run_cli(["injectivity", "--A", a, "--B", b, "--S-image", c], capsys)
    assert code == 3
    cx = payload["counterexample"]
    assert cx is not None and float(cx["residual_bound"]) < 1e-30


def test_injectivity_sign_file(tmp_path, capsys):
    a = write(tmp_path, "A.json", M.identity(2))
    b = write(tmp_path, "B.json", M([[1, 1], [1, 1]]))
    signs = tmp_path / "T.txt"
    signs.write_text("++\n")
    code, payload, _ = run_cli(["injectivity", "--A", a, "--B", b, "--S-signs", str(signs)], capsys)
    assert code == 0 and payload["injective"] is True


def test_minors_and_gamma(tmp_path, capsys):
    at = write(tmp_path, "At.json", M([[1, -1], [1, -1]]))
    b = write(tmp_path, "B.json", M.identity(2))
    code, payload, _ = run_cli(["minors", "--A", at, "--B", b, "--s", "1"], capsys)
    assert code == 3 and payload["holds"] is False

    ap = write(tmp_path, "Ap.json", M([[1]]))
    b2 = write(tmp_path, "B2.json", M([[1, 2]]))
    z = write(tmp_path, "Z.json", M([[1, 1]]))
    code, payload, _ = run_cli(["gamma-det", "--Aprime", ap, "--B", b2, "--Z", z], capsys)
    assert code == 3
    coeffs = {tuple(t["I"] + t["J"]): t["coefficient"] for t in payload["polynomial"]["terms"]}
    assert coeffs == {(0, 0): "-1", (1, 0): "2"}


def test_matroid_commands(tmp_path, capsys):
    a = write(tmp_path, "A.json", M([[1, 0, 1], [0, 1, 1]]))
    code, payload, _ = run_cli(["chirotope", "--A", a], capsys)
    assert code == 0
    assert {"subset": [1, 2], "sign": -1} in payload["signs"]
    code, payload, _ = run_cli(["covectors", "--A", a], capsys)
    assert code == 0 and len(payload["covectors"]) == 13


def test_descartes_commands(tmp_path, capsys):
    a = write(tmp_path, "A.json", M([[1, -1, 1]]))
    b = write(tmp_path, "B.json", M([[1], [2], [5]]))
    code, payload, _ = run_cli(["descartes", "bnd", "--A", a, "--B", b], capsys)
    assert code == 3 and payload["ledger"]["conflicting_J"] == [[0], [1]]

    bt = M([[1, 0], [0, 1], [1, 1]])
    a2 = write(tmp_path, "A2.json", bt.transpose())
    b2 = write(tmp_path, "B2.json", bt)
    code, payload, _ = run_cli(["descartes", "ex", "--A", a2, "--B", b2], capsys)
    assert code == 0 and payload["ex_holds"] is True

    i2 = write(tmp_path, "I2.json", M.identity(2))
    code, payload, _ = run_cli(["descartes", "cone", "--A", i2, "--y", "1,1"], capsys)
    assert code == 0 and payload["in_open_cone"] is True
    code, payload, _ = run_cli(["descartes", "cone", "--A", i2, "--y", "1,0"], capsys)
    assert code == 3


def test_crn_commands(tmp_path, capsys):
    net = tmp_path / "net.txt"
    net.write_text("k1: A -> B\nk2: B -> A\n")
    code, payload, _ = run_cli(["crn", "preclude", str(net)], capsys)
    assert code == 0 and payload["precluded"] is True

    net2 = tmp_path / "net2.txt"
    net2.write_text("k1: 0 -> X\nk2: X -> 0\nk3: 2 X -> 3 X\n")
    code, payload, _ = run_cli(["crn", "preclude", str(net2)], capsys)
    assert code == 3 and payload["steady_state_pair"] is not None

    m = write(tmp_path, "M.json", M([[1, -1]]))
    code, payload, _ = run_cli(["crn", "special", str(net), "--M", m], capsys)
    assert code in (0, 3)


def test_oracle_commands(tmp_path, capsys):
    m = write(tmp_path, "M.json", M([[1, -1]]))
    code, payload, _ = run_cli(["oracle", "sign-set", "--M", m, "--mode", "kernel"], capsys)
    assert code == 0 and payload["vectors"] == ["--", "00", "++"]


def test_usage_errors(tmp_path, capsys):
    code, _, err = run_cli(["injectivity", "--A", "missing.json", "--B", "missing.json", "--full-space"], capsys)
    assert code == 2
    code, _, _ = run_cli(["nonsense"], capsys)
    assert code == 2
    a = write(tmp_path, "A.json", M.identity(2))
    code, _, err = run_cli(["--precision", "32", "chirotope", "--A", a], capsys)
    assert code == 2 and "precision" in err


def test_size_guard_exit_code(tmp_path, capsys):
    wide = write(tmp_path, "W.json", M([[1] * 17]))
    code, _, _ = run_cli(["covectors", "--A", wide], capsys)
    assert code == 4


def test_output_file_and_determinism(tmp_path, capsys):
    a = write(tmp_path, "A.json", M([[1, -1]]))
    b = write(tmp_path, "B.json", M.identity(2))
    outs = []
    for jobs in ("1", "8"):
        out = tmp_path / f"out{jobs}.json"
        code = main(["--jobs", jobs, "--output", str(out),
                     "injectivity", "--A", a, "--B", b, "--full-space"])
        capsys.readouterr()
        assert code == 3
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_console_script_installed():
    proc = subprocess.run(
        [sys.executable, "-m", "signject.cli", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "injectivity" in proc.stdout
