import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from abslinf import integration as IN
from abslinf import transfer as TR
from abslinf.cli import Config, main, parse_element
from abslinf.exactlin import InputError
from abslinf.lie import heisenberg


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_spec_examples(capsys):
    code, out, _ = run(capsys, "trees", "enumerate", "--arity", "1", "--weight", "1", "--format", "text")
    assert code == 0 and out.split()[0] == "(*"
    assert json.loads(run(capsys, "trees", "enumerate", "--arity", "1", "--weight", "1")[1])["count"] == 1
    assert run(capsys, "dupont", "check", "--n", "1", "--format", "text")[1].strip() == "5/5 identities hold"
    assert run(capsys, "bch", "--fixture", "heisenberg", "x", "y", "--format", "text")[1].strip() == "x + y + 1/2 z"


def test_bch_json_matches_library(capsys):
    code, out, _ = run(capsys, "bch", "--fixture", "heisenberg", "x - y", "2 z + x")
    s = heisenberg()
    want = IN.bch(s, {"x": F(1), "y": F(-1)}, {"x": F(1), "z": F(2)})
    got = {t["name"]: F(t["coef"]) for t in json.loads(out)["terms"]}
    assert code == 0 and got == want


def test_bch_from_file(capsys, tmp_path):
    f = tmp_path / "h.json"
    f.write_text(json.dumps(heisenberg().to_json()))
    assert run(capsys, "bch", str(f), "x", "y", "--format", "text")[1].strip() == "x + y + 1/2 z"


def test_mcn_dump_matches_library(capsys):
    code, out, _ = run(capsys, "mcn", "dump", "--n", "1", "--cap", "4")
    assert code == 0 and json.loads(out) == TR.build_mcn(1, 4).to_json()
    assert run(capsys, "mcn", "dump", "--n", "1", "--cap", "4")[1] == out


def test_exit_codes(capsys):
    assert run(capsys, "mcn", "check", "--n", "3")[0] == 3
    assert run(capsys, "bch", "--fixture", "heisenberg", "x", "q")[0] == 2
    assert run(capsys, "bch", "--fixture", "heisenberg-forms", "x.1", "y.1")[0] == 3
    assert run(capsys, "gauge", "act", "--fixture", "curved-heisenberg", "0", "0")[0] == 4
    assert run(capsys, "mc", "check", "--fixture", "curved-heisenberg", "0")[0] == 1
    assert run(capsys, "mc", "check", "--fixture", "curved-heisenberg", "z.t1 dt2")[0] == 0


def test_config(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"mcn_max_n": 3, "weight_cap": 3}))
    monkeypatch.setenv("ABSL_CONFIG", str(cfg))
    assert Config.load() == Config(weight_cap=3, mcn_max_n=3)
    code, out, _ = run(capsys, "mcn", "check", "--n", "3")
    assert code == 0 and json.loads(out)["weight_cap"] == 3
    cfg.write_text(json.dumps({"dual_reading": "sideways"}))
    assert run(capsys, "mcn", "check", "--n", "1")[0] == 2
    with pytest.raises(InputError):
        Config(weight_cap=0)


def test_gauge_and_pi(capsys):
    code, out, _ = run(capsys, "gauge", "flow", "--fixture", "heisenberg-forms", "x.dt1", "y.1")
    obj = json.loads(out)
    assert code == 0 and obj["end"]["text"] == "x.dt1 - z.dt1"
    code, out, _ = run(capsys, "pi", "--fixture", "heisenberg-forms", "0", "--n", "1", "--format", "text")
    assert code == 0 and out.strip() == "3"


def test_horn_fill(capsys):
    code, out, _ = run(capsys, "horn", "fill", "--fixture", "heisenberg", "--n", "2", "--k", "1",
                       "--faces", '{"01": "y", "12": "x"}')
    assert code == 0
    assert json.loads(out)["assignment"]["02"] == [
        {"name": "x", "coef": "1"}, {"name": "y", "coef": "1"}, {"name": "z", "coef": "1/2"}]


def test_dupont_eval(capsys):
    assert run(capsys, "dupont", "eval", "--n", "1", "--op", "p", "t1 dt1", "--format", "text")[1].strip() == "1/2 w01"
    assert run(capsys, "dupont", "eval", "--n", "2", "--op", "i", '{"012": 1}', "--format", "text")[1].strip() == "2 dt1^dt2"


def test_structure_check(capsys, tmp_path):
    assert run(capsys, "structure", "check", "--fixture", "free-lie-3")[0] == 0
    s = heisenberg().to_json()
    s["ops"]["2"].append({"args": ["x", "x"], "value": [{"name": "z", "coef": "1"}]})
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(s))
    assert run(capsys, "structure", "check", str(f))[0] == 1
    f.write_text("{not json")
    assert run(capsys, "structure", "check", str(f))[0] == 2


def test_parse_element():
    s = heisenberg()
    assert parse_element(s, "-x + 1/2 z - 3 y") == {"x": -1, "z": F(1, 2), "y": -3}
    assert parse_element(s, '{"x": "2/3"}') == {"x": F(2, 3)}
    assert parse_element(s, "0") == {}


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "abslinf", "bch", "--fixture", "heisenberg", "x", "y",
                          "--format", "text"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.strip() == "x + y + 1/2 z"
