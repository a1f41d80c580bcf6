import json
import math

import numpy as np
import pytest

import tdchan as td
from tdchan.cli import main
from tdchan.serialize import density_from_obj, density_to_obj, fmt_float, to_json


# ------------------------------------------------------------------ serialize


def test_fmt_float_roundtrip():
    for x in (0.1, 1.0 / 3.0, -2.5e-17, 1e300, 0.0):
        assert float(fmt_float(x)) == x
    assert fmt_float(float("nan")) == "NaN"


def test_to_json_shapes():
    s = to_json({"a": [1.0, 2.5], "b": {"c": None}})
    assert json.loads(s) == {"a": [1.0, 2.5], "b": {"c": None}}


def test_density_obj_roundtrip():
    rho = td.pure_state(np.array([1.0, 1.0j]) / math.sqrt(2.0))
    obj = density_to_obj(rho)
    back = density_from_obj(obj)
    assert np.max(np.abs(back.mat - rho.mat)) < 1e-15
    from tdchan.errors import BadDimension

    with pytest.raises(BadDimension):
        density_from_obj({"dim": 2, "rows": [[1.0, 0.0]]})


# ------------------------------------------------------------------- commands


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_spectrum_command(capsys):
    code, out, _ = run_cli(capsys, "spectrum", "--d", "3", "--t", "-0.5", "--lambda", "1,0,0")
    assert code == 0
    rec = json.loads(out)
    assert sorted(rec["offdiag"]) == pytest.approx([0, 0, 0, 0, 0.25, 0.25], abs=1e-12)
    assert rec["secular"] == pytest.approx([0.25, 0.25, 0.0], abs=1e-12)
    assert rec["dense_delta"] < 1e-9


def test_spectrum_command_tol_failure(capsys):
    code, out, _ = run_cli(
        capsys, "spectrum", "--d", "3", "--t", "-0.5", "--lambda", "1,0,0", "--tol", "1e-18"
    )
    assert code == 1
    assert json.loads(out)["dense_delta"] > 1e-18


def test_spectrum_command_bad_lambda(capsys):
    code, _, err = run_cli(capsys, "spectrum", "--d", "3", "--t", "-0.5", "--lambda", "1,0,0.1")
    assert code == 3
    assert "error:" in err


def test_entropy_command_and_log_base(capsys):
    code, out, _ = run_cli(capsys, "entropy", "--d", "3", "--t", "-0.5", "--lambda", "1,0,0")
    assert code == 0
    rec = json.loads(out)
    assert rec["s_total"] == pytest.approx(2.0 * math.log(2.0), abs=1e-12)
    code, out, _ = run_cli(
        capsys, "entropy", "--d", "3", "--t", "-0.5", "--lambda", "1,0,0", "--log-base", "2"
    )
    assert code == 0
    rec2 = json.loads(out)
    assert rec2["s_total"] == pytest.approx(2.0, abs=1e-12)
    assert rec2["s1"] == pytest.approx(1.0, abs=1e-12)
    assert rec2["c"] == pytest.approx(0.5)  # a mass, not an entropy: unscaled


def test_apply_command(tmp_path, capsys):
    rho = td.pure_state(np.eye(3)[0])
    path = tmp_path / "rho.json"
    path.write_text(to_json(density_to_obj(rho)))
    code, out, _ = run_cli(capsys, "apply", "--d", "3", "--t", "-0.5", "--input", str(path))
    assert code == 0
    got = density_from_obj(json.loads(out))
    assert np.allclose(np.diag(got.mat).real, [0.0, 0.5, 0.5], atol=1e-12)


def test_apply_command_parse_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("{nope")
    code, _, err = run_cli(capsys, "apply", "--d", "3", "--t", "-0.5", "--input", str(path))
    assert code == 2
    assert "error:" in err


def test_apply_command_missing_file(tmp_path, capsys):
    code, _, err = run_cli(
        capsys, "apply", "--d", "3", "--t", "-0.5", "--input", str(tmp_path / "none.json")
    )
    assert code == 2


def test_apply_command_invalid_state(tmp_path, capsys):
    obj = {"dim": 2, "rows": [[[1.5, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}
    path = tmp_path / "rho.json"
    path.write_text(json.dumps(obj))
    code, _, err = run_cli(capsys, "apply", "--d", "2", "--t", "-0.5", "--input", str(path))
    assert code == 3


def test_min_entropy_command(capsys):
    code, out, _ = run_cli(capsys, "min-entropy", "--d", "3", "--t", "-0.5", "--restarts", "4")
    assert code == 0
    rec = json.loads(out)
    assert rec["h"] == pytest.approx(rec["h_closed_form"], abs=1e-6)
    arg = np.array(rec["argmin_re"]) + 1j * np.array(rec["argmin_im"])
    assert np.linalg.norm(arg) == pytest.approx(1.0, abs=1e-9)


def test_additivity_command(capsys):
    code, out, _ = run_cli(
        capsys,
        "additivity",
        "--d", "2", "--t=-1:0:3", "--restarts", "3", "--n-random", "20",
    )
    assert code == 0
    rows = json.loads(out)
    assert [r["t"] for r in rows] == pytest.approx([-1.0, -0.5, 0.0])
    for r in rows:
        assert r["gap"] >= -1e-6
    # frozen spot: h(2, -1) = 0 and the simplex minimum vanishes too
    assert rows[0]["h"] == pytest.approx(0.0, abs=1e-12)
    assert rows[0]["min_simplex"] == pytest.approx(0.0, abs=1e-9)


def test_additivity_single_t_and_csv(capsys):
    code, out, _ = run_cli(
        capsys,
        "additivity",
        "--d", "3", "--t", "-0.5", "--restarts", "3", "--n-random", "10",
        "--format", "csv",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,h,min_simplex,min_random,gap"
    vals = lines[1].split(",")
    assert float(vals[1]) == pytest.approx(math.log(2.0), abs=1e-9)


def test_verify_command_and_exit(capsys):
    code, out, _ = run_cli(capsys, "verify", "--kind", "main", "--d", "3", "--samples", "100")
    assert code == 0
    reports = json.loads(out)
    assert len(reports) == 9
    assert all(r["violations"] == 0 for r in reports)
    assert all(r["kind"] == "main" for r in reports)


def test_verify_all_kinds(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--kind", "all", "--d", "3", "--samples", "40", "--seed", "5"
    )
    assert code == 0
    kinds = {r["kind"] for r in json.loads(out)}
    assert kinds == {"main", "k0", "second_term", "extreme", "final_poly", "sympol", "schur"}


def test_verify_hyphenated_kind(capsys):
    code, out, _ = run_cli(
        capsys, "verify", "--kind", "second-term", "--d", "4", "--samples", "50"
    )
    assert code == 0
    assert all(r["kind"] == "second_term" for r in json.loads(out))


def test_verify_thread_determinism(capsys):
    argv = ["verify", "--kind", "main", "--d", "3:4", "--samples", "500", "--seed", "42"]
    code1, out1, _ = run_cli(capsys, *argv, "--threads", "1")
    code2, out2, _ = run_cli(capsys, *argv, "--threads", "8")
    assert code1 == code2 == 0
    assert out1 == out2


def test_schur_scan_alias(capsys):
    code, out, _ = run_cli(capsys, "schur-scan", "--d", "3", "--samples", "60")
    assert code == 0
    assert all(r["kind"] == "schur" for r in json.loads(out))


def test_bad_channel_parameters_exit_3(capsys):
    code, _, err = run_cli(capsys, "spectrum", "--d", "3", "--t", "-0.6", "--lambda", "1,0,0")
    assert code == 3
    code, _, err = run_cli(capsys, "entropy", "--d", "1", "--t", "0.0", "--lambda", "1")
    assert code == 3


def test_unknown_kind_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--kind", "bogus", "--d", "3"])
    assert exc.value.code == 2


def test_threads_env_override(monkeypatch):
    from tdchan.cli import _resolve_threads

    monkeypatch.setenv("TDCHAN_THREADS", "3")
    assert _resolve_threads(None) == 3
    assert _resolve_threads(2) == 2
    monkeypatch.delenv("TDCHAN_THREADS")
    assert _resolve_threads(None) >= 1
