import json
from pathlib import Path

import pytest

from toboggan import cli

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_qe_m1n1(capsys):
    code, out, _ = run(capsys, "qe", "--M", "1", "--N", "1", "--alpha", "0", "--beta", "0")
    assert code == 0
    data = json.loads(out)
    (sol,) = data["solutions"]
    assert (sol["E"], sol["g2"], sol["g4"]) == (0.0, 0.0, -4.0)
    assert out == (GOLDEN / "qe_M1_N1.json").read_text()


def test_wedges_table(capsys):
    code, out, _ = run(capsys, "wedges", "--D", "10", "--sign", "minus", "--format", "text")
    assert code == 0
    assert out.splitlines()[0].split() == ["first", "right", "(-5/12*pi,", "-1/4*pi)", "[minus]"]


def test_wedges_golden(capsys):
    code, out, _ = run(capsys, "wedges", "--D", "10", "--sign", "minus")
    assert code == 0 and out == (GOLDEN / "wedges_D10_minus.json").read_text()


def test_csv_output(capsys):
    code, out, _ = run(capsys, "qe", "--M", "2", "--N", "1", "--beta", "1", "--format", "csv")
    assert code == 0
    header, row = out.splitlines()
    assert header == "E_re,E_im,g2_re,g2_im,g4,residual,flagged"
    assert row.startswith("-2.00000000000000e+00,0.00000000000000e+00,1.00000000000000e+00")


def test_contour_report(capsys):
    code, out, _ = run(capsys, "contour", "--contour", "wedge-join", "--n", "3", "--D", "2")
    data = json.loads(out)
    assert code == 0 and data["name"] == "third-third" and data["cut_crossings"] == 2


def test_transform(capsys):
    pot = '{"terms": [[1, "4/3"], [2, "-2"]]}'
    code, out, _ = run(capsys, "transform", "--potential", pot, "--alpha", "3", "--lam", "1/9")
    data = json.loads(out)
    assert code == 0
    assert ["4/3", "8"] in data["exponent_map"] and ["2", "10"] in data["exponent_map"]
    assert data["folded_potential"]["centrifugal"] == "0"  # 2 - f with f = 2


def test_dictionary(capsys):
    code, out, _ = run(capsys, "transform", "--dictionary", "--format", "text")
    assert code == 0 and "lambda=1/9" in out
    rows = {line.split()[0]: line for line in out.splitlines()[1:9]}
    assert "[ok]" in rows["a"] and "[DIFFERS]" in rows["x^2"] and "[DIFFERS]" in rows["E"]


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", "--potential", "harmonic", "--points", "401", "--k", "2")
    data = json.loads(out)
    assert code == 0
    assert [round(e, 3) for e in data["filtered_real"]] == [1.0, 3.0]


def test_figures(tmp_path, capsys):
    code, out, _ = run(capsys, "figures", "--outdir", str(tmp_path))
    assert code == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == [f"fig{i}.svg" for i in range(1, 8)]


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"command": "qe", "M": 2, "N": 1, "beta": 0.5}))
    code, out, _ = run(capsys, "--config", str(cfg))
    assert code == 0 and json.loads(out)["solutions"][0]["E"] == -1.0
    # explicit flags override the file
    code, out, _ = run(capsys, "qe", "--config", str(cfg), "--beta", "1")
    assert json.loads(out)["solutions"][0]["E"] == -2.0


def test_env_output_dir(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.ENV_OUTPUT, str(tmp_path))
    code, out, _ = run(capsys, "wedges")
    assert code == 0 and out == ""
    assert (tmp_path / "wedges.json").read_text() == (GOLDEN / "wedges_D10_minus.json").read_text()


@pytest.mark.parametrize("argv", [
    ["qe", "--M", "0"],
    ["qe", "--M", "x"],
    ["wedges", "--D", "3"],
    ["wedges", "--sign", "sideways"],
    ["spectrum", "--contour", "wedge-join", "--n", "1", "--p", "4"],
    ["contour", "--eps", "-1"],
    ["nonsense"],
    [],
    ["qe", "--bogus"],
    ["transform"],
])
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "error" in err


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"command": "qe", "colour": "red"}))
    code, _, err = run(capsys, "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_computation_error(monkeypatch, capsys):
    def boom(*a, **k):
        raise RuntimeError("eigensolver did not converge")

    monkeypatch.setattr(cli, "solve_spectrum", boom)
    code, _, err = run(capsys, "spectrum", "--points", "101")
    assert code == 1 and "did not converge" in err


def test_verify_quick(capsys):
    code, out, _ = run(capsys, "verify", "--quick")
    assert code == 0
    assert out.count("PASS") == 6 and "FAIL" not in out
