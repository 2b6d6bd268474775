import io
import subprocess
import sys

import pytest

from schurlab import __version__
from schurlab.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_enumerate_c2_to_stdout():
    code, text = run("enumerate", "--group", "C:2")
    assert code == 0
    assert "count 1" in text


@pytest.mark.parametrize("spec", ["D:35", "", "Q:8"])
def test_bad_group_spec(spec):
    code, _ = run("enumerate", "--group", spec)
    assert code == 2


def test_enumerate_is_idempotent(tmp_path):
    path = tmp_path / "d26.census"
    code, text = run("enumerate", "--group", "D:26", "--out", str(path))
    assert code == 0 and "177 S-rings" in text
    first = path.read_bytes()
    run("enumerate", "--group", "D:26", "--out", str(path))
    assert path.read_bytes() == first


def test_classify_census_file(tmp_path):
    path = tmp_path / "d26.census"
    run("enumerate", "--group", "D:26", "--out", str(path))
    code, text = run("classify", "--in", str(path))
    assert code == 0
    assert "status=PASS entries=177 unmatched=0 unknown=0" in text
    rows = [ln for ln in text.splitlines() if "rank=" in ln]
    assert len(rows) == 177 and all(ln.count("Y") >= 1 for ln in rows)


def test_schurity_output_independent_of_workers():
    code1, a = run("schurity", "--group", "D:14", "--workers", "1")
    code2, b = run("schurity", "--group", "D:14", "--workers", "2")
    assert code1 == code2 == 0
    assert a == b
    assert "total=55 schurian=55 nonschurian=0 unknown=0" in a


def test_header_names_version_and_budgets():
    _, text = run("cyclotomy", "--p", "29")
    assert text.splitlines()[0] == f"# schurlab {__version__}"
    assert "node_budget=" in text.splitlines()[1]
    assert "x=5" in text and "holds" in text


def test_diffset_lists_singer_classes():
    code, text = run("diffset", "--p", "13", "--mode", "up_to_translation", "--list")
    assert code == 0
    assert "(13, 4, 1): 4" in text
    assert '"elements": [0, 1, 3, 9]' in text


def test_verify_main2_29():
    code, text = run("verify", "main2", "--p", "29")
    assert code == 0
    assert "main2 p=29: PASS" in text


def test_verify_json():
    code, text = run("verify", "dif2q", "--p", "7", "--json")
    assert code == 0
    assert '"status": "PASS"' in text


def test_verify_needs_p():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "main1"], out=io.StringIO())
    assert exc.value.code == 2


def test_env_budget_override(monkeypatch):
    monkeypatch.setenv("SCHURLAB_AUT_BUDGET", "2")
    code, text = run("schurity", "--group", "D:10")
    assert "aut_budget=2" in text
    assert code == 3 and "unknown=" in text and "unknown=0" not in text


def test_flag_beats_env(monkeypatch):
    monkeypatch.setenv("SCHURLAB_AUT_BUDGET", "2")
    code, text = run("schurity", "--group", "D:6", "--aut-budget", "100000")
    assert code == 0 and "aut_budget=100000" in text


def test_nonpositive_budget_rejected():
    code, _ = run("schurity", "--group", "D:6", "--aut-budget", "0")
    assert code == 2


def test_wall_clock_budget():
    code, text = run("verify", "classification", "--p", "13", "--wall-clock", "1")
    assert code == 3
    assert "wall clock" in text


def test_console_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "schurlab.cli", "--version"], capture_output=True, text=True, check=False
    )
    assert res.returncode == 0 and __version__ in res.stdout
