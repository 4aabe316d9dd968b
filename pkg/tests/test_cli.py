import json
import subprocess
import sys

import pytest

from stably_cayley.cli import main
from stably_cayley.glattice import j_gamma
from stably_cayley.groups import elementary_abelian_group


def _write(tmp_path, doc, name="req.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def test_classify_so4(tmp_path):
    inp = _write(tmp_path, {"family": "A", "rank": 1, "m": 2, "generators": [[1, 1]]})
    out = tmp_path / "out.json"
    assert main(["classify", "--input", inp, "--output", str(out)]) == 0
    rep = json.loads(out.read_text())
    assert rep["stably_cayley"] is True
    assert rep["decomposition"] == [{"coordinates": [1, 2], "factor": "SO4"}]
    assert rep["input"]["family"] == "A"


def test_classify_e8(tmp_path, capsys):
    inp = _write(tmp_path, {"family": "E8", "rank": 8, "m": 1})
    assert main(["classify", "--input", inp]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["stably_cayley"] is False and rep["witness"]["branch"] == "type-excluded"


@pytest.mark.parametrize(
    "doc,needle",
    [
        ({"family": "A", "rank": 1, "m": 2, "generators": [[1, "x"]]}, "generators/0/1"),
        ({"family": "A", "rank": 1}, "'m' is a required property"),
        ({"family": "A", "rank": 1, "m": 2, "generators": [[1]]}, "must have 2 entries"),
        ({"family": "D", "rank": 2, "m": 1}, "D2"),
        ({"family": "A", "rank": 1, "m": 1, "colour": 3}, "colour"),
    ],
)
def test_classify_input_errors(tmp_path, capsys, doc, needle):
    inp = _write(tmp_path, doc)
    assert main(["classify", "--input", inp]) == 2
    assert needle in capsys.readouterr().err


def test_classify_unreadable_input(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert main(["classify", "--input", str(p)]) == 2
    assert main(["classify", "--input", str(tmp_path / "missing.json")]) == 2


def test_classify_is_deterministic(tmp_path):
    inp = _write(tmp_path, {"family": "B", "rank": 3, "m": 1, "generators": [[1]], "options": {"sha_witness": True}})
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["classify", "--input", inp, "--output", str(a)]) == 0
    assert main(["classify", "--input", inp, "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rep = json.loads(a.read_text())
    assert rep["witness"]["sha_search"]["found"]


def test_timings_only_on_request(tmp_path, capsys):
    inp = _write(tmp_path, {"family": "G", "rank": 2, "m": 1})
    main(["classify", "--input", inp])
    assert "timings" not in json.loads(capsys.readouterr().out)
    main(["classify", "--input", inp, "--timings"])
    assert "timings" in json.loads(capsys.readouterr().out)


@pytest.mark.parametrize(
    "argv,sha",
    [
        (["sha", "J:klein2"], "Z/2"),
        (["sha", "J:klein3"], "Z/3"),
        (["sha", "perm:regular-of-S3"], "0"),
        (["sha", "so6-family:m=2", "--subgroup", "a,b"], "Z/2"),
        (["sha", "m-family:B1^3"], "Z/2"),
        (["sha", "--lattice", "J", "--group", "klein2", "--h2-path", "cross-check"], "Z/2"),
        (["sha", "klein-b1", "--subgroup", "sigma,tau"], "0"),
    ],
)
def test_sha_command(capsys, argv, sha):
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert f"Sh: {sha}\n" in out


def test_sha_json_and_file(tmp_path, capsys):
    p = tmp_path / "j.json"
    p.write_text(json.dumps(j_gamma(elementary_abelian_group(2, 2)).to_dict()))
    assert main(["sha", "--lattice", str(p), "--json"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["sha"] == "Z/2" and out["h2"] == "Z/2"


def test_sha_errors(capsys):
    assert main(["sha", "nonsense"]) == 2
    assert main(["sha", "so6-family:m=2", "--subgroup", "zz"]) == 2
    assert main(["sha", "perm:regular-of-S4", "--h2-path", "baseline", "--budget", "100"]) == 1
    assert "budget" in capsys.readouterr().err


def test_verify_paper_single(capsys):
    assert main(["verify-paper", "j-gamma-p2"]) == 0
    out = capsys.readouterr().out
    assert "j-gamma-p2" in out and "PASS" in out
    assert main(["verify-paper", "no-such-check"]) == 2


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "stably_cayley", "verify-paper", "klein-b1"], capture_output=True, text=True)
    assert r.returncode == 0 and "PASS" in r.stdout
