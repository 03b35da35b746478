import json
import subprocess
import sys

import pytest

from conftest import F, line, scheme, twisted_cubic
from cremona import serialize as ser
from cremona.cli import main
from cremona.equivalence import points_equivalence, verify_chain
from cremona.poly import Form
from cremona.projective import Point, Sampler

CUBIC_JSON = {
    "ambient_dim": 3,
    "components": [{"arity": 2, "forms": ["t0^3", "t0^2*t1", "t0*t1^2", "t1^3"]}],
}
THREE_LINES_JSON = {
    "components": [
        {"span": [[1, 0, 0, 0], [0, 1, 0, 0]]},
        {"span": [[1, 0, 0, 0], [0, 0, 1, 0]]},
        {"span": [[1, 0, 0, 0], [0, 0, 0, 1]]},
    ]
}
POINTS_JSON = {
    "source": [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [1, 2, 3]],
    "target": [[0, 1, 0], [1, 0, 0], ["1/2", 3, 1], [2, 1, 5], [1, -1, 4]],
}


@pytest.fixture
def files(tmp_path):
    def write(name, obj):
        p = tmp_path / name
        p.write_text(json.dumps(obj))
        return str(p)

    return write


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_points_equiv_then_verify(files, tmp_path, capsys):
    chain = tmp_path / "chain.json"
    code, _, _ = run(capsys, "points-equiv", "--in", files("pts.json", POINTS_JSON), "--seed", 7, "--out", chain)
    assert code == 0
    code, out, _ = run(capsys, "verify", "--chain", chain)
    assert code == 0 and out.startswith("OK points")


def test_monoid_dim(files, capsys):
    code, out, _ = run(capsys, "monoid-dim", "--scheme", files("tc.json", CUBIC_JSON), "--vertex", "[0,1,0,0]", "--d", 4)
    assert code == 0 and out.strip() == "11"


def test_bivertex_dim(files, capsys):
    empty = files("empty.json", {"components": []})
    code, out, _ = run(capsys, "monoid-dim", "--scheme", empty, "--vertex", "[0,0,0,1]", "--vertex2", "[0,0,1,0]", "--d", 2)
    assert code == 0 and out.strip() == "7"


def test_contract_three_lines(files, tmp_path, capsys):
    chain = tmp_path / "c.json"
    code, out, _ = run(capsys, "contract", "--scheme", files("l.json", THREE_LINES_JSON), "--seed", 3, "--out", chain)
    assert code == 0 and out.splitlines()[0] == "3 distinct points"
    assert run(capsys, "verify", "--chain", chain)[0] == 0


def test_same_seed_same_bytes(files, tmp_path, capsys):
    src = files("pts.json", POINTS_JSON)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "points-equiv", "--in", src, "--seed", 11, "--out", a)
    run(capsys, "points-equiv", "--in", src, "--seed", 11, "--out", b)
    assert a.read_bytes() == b.read_bytes()


def test_monoid_find(files, capsys):
    code, out, _ = run(capsys, "monoid-find", "--scheme", files("tc.json", CUBIC_JSON), "--vertex", "[0,1,0,0]", "--seed", 1)
    assert code == 0
    data = json.loads(out)
    eq = ser.form_from_json(data["equation"])
    assert data["degree"] == 2 and not eq.substitute(list(twisted_cubic().forms))


def test_search_exhausted_exit_code(files, capsys):
    code, _, err = run(
        capsys, "monoid-find", "--scheme", files("tc.json", CUBIC_JSON), "--vertex", "[0,1,0,0]", "--seed", 1, "--max-degree", 1
    )
    assert code == 3 and "error [" in err


def test_input_error_exit_codes(files, tmp_path, capsys):
    tc = files("tc.json", CUBIC_JSON)
    assert run(capsys, "monoid-dim", "--scheme", tc, "--vertex", "[1,0,0,0]", "--d", 2)[0] == 2
    assert run(capsys, "verify", "--chain", tmp_path / "missing.json")[0] == 2
    assert run(capsys, "verify", "--chain", files("junk.json", {"format": "other"}))[0] == 2
    assert run(capsys, "stereographic", "--equation", "x0*x1 - ", "--vertex", "[1,0,0]")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["points-equiv", "--in", files("pts.json", POINTS_JSON)])  # --seed is mandatory
    assert exc.value.code == 2


def test_verification_failure_exit_code(files, tmp_path, capsys):
    chain = tmp_path / "chain.json"
    run(capsys, "points-equiv", "--in", files("pts.json", POINTS_JSON), "--seed", 7, "--out", chain)
    data = json.loads(chain.read_text())
    data["target"][0] = ["1", "1", "1"]
    chain.write_text(json.dumps(data))
    code, _, err = run(capsys, "verify", "--chain", chain)
    assert code == 4 and "error [" in err


def test_dejonquieres_command(files, capsys):
    job = {"vertex": [1, 0, 0], "moves": [[[0, 1, 1], [2, 1, 1]]], "fixed": []}
    code, out, _ = run(capsys, "dejonquieres", "--in", files("dj.json", job), "--seed", 2)
    data = json.loads(out)
    fwd = ser.map_from_json(data["forward"])
    assert code == 0 and fwd(Point([0, 1, 1])) == Point([2, 1, 1])
    assert data["certificate"]["delta"] == data["degree"]


def test_quadro_quadric_command(files, capsys):
    job = {"p": [1, 0, 0, 0], "plane": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "quadric": "t0*t1 - t2^2"}
    code, out, _ = run(capsys, "quadro-quadric", "--in", files("qq.json", job))
    fwd = ser.map_from_json(json.loads(out)["forward"])
    assert code == 0
    assert list(fwd.forms) == [F("x0*x1"), F("x0*x2"), F("x0*x3"), F("x1*x2 - x3^2")]


def test_stereographic_command(capsys):
    code, out, _ = run(capsys, "stereographic", "--equation", "x0*x1 - x2^2", "--vertex", "[1,0,0]")
    inv = ser.map_from_json(json.loads(out)["inverse"])
    assert code == 0 and inv.forms == (F("x1^2", 2), F("x0^2", 2), F("x0*x1", 2))


def test_double_projection_command(capsys):
    code, out, _ = run(capsys, "double-projection", "--equation", "x0*x1 + x2*x3", "--p1", "[0,0,0,1]", "--p2", "[0,0,1,0]")
    fwd = ser.map_from_json(json.loads(out)["forward"])
    assert code == 0 and fwd.forms == (F("x0*x2", 3), F("x1*x2", 3), F("-x0*x1", 3))


def test_compose_command(files, tmp_path, capsys):
    job = {"p": [1, 0, 0, 0], "plane": [[0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "quadric": "t0*t1 - t2^2"}
    code, out, _ = run(capsys, "quadro-quadric", "--in", files("qq.json", job))
    triple = files("triple.json", json.loads(out))
    inverse_only = files("inv.json", json.loads(out)["inverse"])
    code, out, _ = run(capsys, "compose", "--maps", triple, inverse_only)
    composite = ser.map_from_json(json.loads(out)["composite"])
    assert code == 0 and composite.degree == 4
    assert composite(Point([1, 2, 3, 5])) == Point([1, 2, 3, 5])


def test_pipeline_equiv_command(files, tmp_path, capsys):
    job = {
        "phi": {"components": [{"span": [[1, 0, 0, 0], [0, 1, 0, 0]]}, {"span": [[0, 0, 1, 0], [0, 0, 0, 1]]}]},
        "psi": {"components": [{"span": [[1, 0, 0, 0], [0, 1, 0, 0]]}, {"span": [[1, 0, 0, 0], [0, 0, 1, 0]]}]},
    }
    chain = tmp_path / "pipe.json"
    code, _, _ = run(capsys, "pipeline-equiv", "--in", files("p.json", job), "--seed", 5, "--samples", 6, "--out", chain)
    assert code == 0
    code, out, _ = run(capsys, "verify", "--chain", chain)
    assert code == 0 and out.startswith("OK pipeline")


def test_console_script_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "cremona.cli", "stereographic", "--equation", "x0*x1 - x2^2", "--vertex", "[1,0,0]"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and '"inverse"' in proc.stdout


# -- serialization ------------------------------------------------------------------


def test_form_round_trip():
    f = F("3/2*x0^2*x3 - x1*x2*x3 + 7*x3^3")
    obj = ser.form_to_json(f)
    assert obj["terms"][0]["coeff"] == "3/2"
    assert ser.form_from_json(obj) == f
    assert ser.form_from_json(json.loads(json.dumps(obj))) == f
    assert ser.form_from_json("x0 - 2*x1", 2) == Form.linear([1, -2])


def test_chain_round_trip_is_exact():
    s = Sampler(3)
    chain = points_equivalence([[1, 2, 3], [3, 1, 1]], [[2, 1, 1], [0, 1, 5]], s, seed=3)
    text = ser.dumps(ser.chain_to_json(chain))
    back = ser.chain_from_json(json.loads(text))
    assert ser.dumps(ser.chain_to_json(back)) == text
    verify_chain(back)


def test_scheme_round_trip():
    z = scheme(twisted_cubic(), line([1, 0, 0, 0], [0, 1, 1, 0]))
    again = ser.scheme_from_json(json.loads(ser.dumps(ser.scheme_to_json(z))))
    assert again == z
