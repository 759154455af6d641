import json

import numpy as np
import pytest

from framecal import __version__, io, linalg, sampling
from framecal.cli import main
from framecal.frame import frame_operator, make_frame, standard_dual


@pytest.fixture
def files(tmp_path):
    out = {}

    def put(name, obj):
        path = tmp_path / f"{name}.json"
        if isinstance(obj, np.ndarray):
            io.save_operator(obj, path)
        else:
            io.save_frame(obj, path)
        out[name] = str(path)

    f, g = sampling.partition_dual_pair()
    put("F", f)
    put("G", g)
    put("Geps", sampling.scaled_partition_pair(0.5)[1])
    rep = sampling.repeated_basis_frame()
    put("R", rep)
    put("Rdual", standard_dual(rep))
    put("Rkernel", rep.with_vectors([[0, 1], [0, 0], [0, -1]]))
    put("Rzero", rep.with_vectors(np.zeros((3, 2))))
    put("E", make_frame(np.eye(2)))
    put("E3", make_frame(np.eye(3)))
    put("Dinv", linalg.psd_inv_sqrt(frame_operator(rep)))
    put("Dbad", -0.5 * np.eye(2))
    put("U", np.diag([1.0, 2.0]))
    put("V", np.diag([1.0, 0.5]))
    put("Vapprox", np.diag([0.9, 0.5]))
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2, "atoms": [')
    out["bad"] = str(bad)
    out["dir"] = tmp_path
    return out


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    report = json.loads(captured.out) if captured.out.strip() else None
    return code, report, captured.err


def test_inspect_partition(files, capsys):
    code, rep, _ = run(capsys, "inspect", files["F"])
    assert code == 0
    v = rep["verdicts"]
    assert (v["lower_bound"], v["upper_bound"], v["classification"]) == (1.0, 1.0, "parseval")
    assert v["mu_complete"] and not v["riesz_basis"]
    assert rep["version"] == __version__
    assert set(rep["tolerances"]) == {"classify", "dual", "rank", "bound"}


def test_inspect_repeated_basis(files, capsys):
    code, rep, _ = run(capsys, "inspect", files["R"])
    assert code == 0
    v = rep["verdicts"]
    assert v["lower_bound"] == pytest.approx(1.0)
    assert v["upper_bound"] == pytest.approx(2.0)
    assert v["riesz_basis"] is False


def test_inspect_truncated(files, capsys):
    code, rep, err = run(capsys, "inspect", files["bad"])
    assert code == 2
    assert rep is None
    assert "invalid" in err


def test_inspect_missing_file(files, capsys):
    assert run(capsys, "inspect", files["dir"] / "nope.json")[0] == 2


def test_check_dual_partition(files, capsys):
    code, rep, _ = run(capsys, "check-dual", files["F"], files["G"])
    assert code == 0
    assert rep["verdicts"]["defect"]["defect"] <= 1e-12
    assert rep["verdicts"]["dual_tol"] == 1e-8


def test_check_dual_boundary_case(files, capsys):
    code, rep, _ = run(capsys, "check-dual", files["F"], files["Geps"])
    assert code == 1
    d = rep["verdicts"]["defect"]
    assert d["defect"] == pytest.approx(1.0, abs=1e-12)
    assert not d["is_approx_dual"]
    assert d["note"]


def test_check_dual_mismatch(files, capsys):
    assert run(capsys, "check-dual", files["F"], files["E"])[0] == 2


def test_defect_command(files, capsys):
    code, rep, _ = run(capsys, "defect", files["F"], files["G"])
    assert code == 0
    assert rep["verdicts"]["bound_check"]["guaranteed"] == pytest.approx(0.2)
    assert run(capsys, "defect", files["F"], files["Geps"])[0] == 1


def test_construct_standard_dual_of_parseval(files, capsys):
    out = files["dir"] / "sd.json"
    code, rep, _ = run(capsys, "construct", "--kind", "standard-dual", "--frame", files["F"], "--out", out)
    assert code == 0
    assert io.load_frame(out).vectors.tobytes() == io.load_frame(files["F"]).vectors.tobytes()
    assert run(capsys, "check-dual", files["F"], out)[0] == 0


def test_construct_douglas_kernel(files, capsys):
    out = files["dir"] / "g.json"
    code, _, _ = run(
        capsys, "construct", "--kind", "douglas-kernel", "--frame", files["R"],
        "--operator", files["Dinv"], "--kernel", files["Rkernel"], "--out", out,
    )
    assert code == 0
    np.testing.assert_allclose(io.load_frame(out).vectors, [[0.5, 1], [0, 1], [0.5, -1]], atol=1e-14)
    assert run(capsys, "check-dual", files["R"], out)[0] == 0


def test_construct_douglas_dualpair_bad_operator(files, capsys):
    code, rep, err = run(
        capsys, "construct", "--kind", "douglas-dualpair", "--frame", files["R"],
        "--operator", files["Dbad"], "--kernel", files["Rdual"],
    )
    assert code == 1
    assert rep["verdicts"]["error"] == "HypothesisViolated"


def test_construct_exactify(files, capsys):
    code, rep, _ = run(capsys, "construct", "--kind", "exactify", "--frame", files["E"], "--partner", files["E"])
    assert code == 0
    assert rep["verdicts"]["defect"] <= 1e-12


def test_construct_missing_operator(files, capsys):
    assert run(capsys, "construct", "--kind", "douglas-kernel", "--frame", files["R"])[0] == 2


def test_remove_atom_removable(files, capsys):
    code, rep, _ = run(capsys, "remove-atom", files["R"], files["Rdual"], "--index", 0)
    assert code == 0
    v = rep["verdicts"]
    assert v["actual_lower"] >= v["guaranteed_lower"]
    assert v["guaranteed_lower"] == pytest.approx(0.2)


def test_remove_atom_degenerate(files, capsys):
    code, rep, _ = run(capsys, "remove-atom", files["E"], files["E"], "--index", 0)
    assert code == 1
    assert rep["verdicts"]["omega0"] == [0]
    assert rep["verdicts"]["incomplete"] is True


def test_remove_atom_bad_index(files, capsys):
    assert run(capsys, "remove-atom", files["R"], files["Rdual"], "--index", 99)[0] == 2


def test_affine_dual(files, capsys):
    code, rep, _ = run(
        capsys, "affine-dual", files["R"], files["Rdual"], files["Rdual"], "--alpha-re", 0.3
    )
    assert code == 0
    assert rep["verdicts"]["is_dual"]


def test_transport_exact_and_approximate(files, capsys):
    code, rep, _ = run(capsys, "transport", files["F"], files["G"], "--U", files["U"], "--V", files["V"])
    assert code == 0 and rep["verdicts"]["mode"] == "exact"
    code, rep, _ = run(capsys, "transport", files["F"], files["G"], "--U", files["U"], "--V", files["Vapprox"])
    assert code == 0 and rep["verdicts"]["mode"] == "approximate"
    assert rep["verdicts"]["defect"]["defect"] == pytest.approx(0.1)


def test_douglas(files, capsys):
    code, rep, _ = run(capsys, "douglas", files["R"], files["Rdual"])
    assert code == 0
    assert rep["verdicts"]["defect_via_D"] <= 1e-14
    assert rep["verdicts"]["dd_star_ok"]


def test_perturb_kinds(files, capsys):
    code, rep, _ = run(capsys, "perturb", "--kind", "parseval", files["E"], files["E"], "--lam", 0)
    assert code == 0 and rep["verdicts"]["kind"] == "parseval-perturb"
    code, rep, _ = run(capsys, "perturb", "--kind", "analysis", files["E"], files["E"], "--K", files["E"], "--lam", 2)
    assert code == 1 and rep["verdicts"]["applicable"] is False
    code, _, _ = run(capsys, "perturb", "--kind", "dualpair", files["E"], files["E"], "--lam", 0)
    assert code == 2
    code, rep, _ = run(capsys, "perturb", "--kind", "parseval", files["R"], files["R"], "--lam", 0)
    assert code == 1 and rep["verdicts"]["error"] == "NotParseval"


def test_cwt_defaults(capsys):
    code, rep, _ = run(capsys, "cwt")
    assert code == 0
    v = rep["verdicts"]
    assert 0.9 <= v["min_ratio"] <= v["max_ratio"] <= 1.1
    assert {"c_psi", "min_ratio", "max_ratio"} <= v.keys()


def test_cwt_coarse_scales_fail(capsys):
    assert run(capsys, "cwt", "--na", 2)[0] == 1


@pytest.mark.parametrize("flags", [["--amin", 0], ["--amin", -1], ["--amin", 2], ["--probes", 0]])
def test_cwt_bad_grid(capsys, flags):
    assert run(capsys, "cwt", *flags)[0] == 2


def test_reports_are_byte_identical(files, capsys):
    main(["check-dual", files["F"], files["G"]])
    first = capsys.readouterr().out
    main(["check-dual", files["F"], files["G"]])
    assert capsys.readouterr().out == first


def test_env_tolerance_override(files, capsys, monkeypatch):
    monkeypatch.setenv("FRAMECAL_TOL", "1e-3")
    code, rep, _ = run(capsys, "check-dual", files["F"], files["G"])
    assert code == 0
    assert rep["tolerances"]["dual"] == 1e-3
    monkeypatch.setenv("FRAMECAL_TOL", "nope")
    assert run(capsys, "check-dual", files["F"], files["G"])[0] == 2


def test_unknown_command_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
