import json
import math

import numpy as np
import pytest

from fastsphere import equilibria as eq
from fastsphere.cli import main
from fastsphere.errors import BracketFailureError
from fastsphere.model import sphere_geometry


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_sweep(text):
    lines = text.strip().splitlines()
    assert lines[0] == "kappa,branch,alpha,eta,com_norm,energy"
    rows = []
    for line in lines[1:]:
        kappa, branch, alpha, eta, com, energy = line.split(",")
        rows.append(
            {
                "kappa": float(kappa),
                "branch": branch,
                "alpha": float(alpha) if alpha else None,
                "eta": float(eta) if eta else None,
                "com_norm": float(com),
                "energy": float(energy),
            }
        )
    return rows


class TestCritical:
    def test_case_i_payload(self, capsys):
        code, out, _ = run(capsys, "critical", "--d", "2", "--m", "0.5")
        assert code == 0
        payload = json.loads(out)
        assert payload["regime"] == "case_i"
        assert payload["kappa1"] == pytest.approx(5.3174, abs=5e-4)
        assert payload["kappa2"] is None
        assert payload["kappa3"] is None
        assert payload["alpha_bar"] is None
        assert payload["kappa_c"] is None

    def test_case_iii_payload(self, capsys):
        code, out, _ = run(capsys, "critical", "--d", "5", "--m", "0.3")
        assert code == 0
        payload = json.loads(out)
        assert payload["regime"] == "case_iii"
        assert payload["kappa3"] / payload["kappa2"] == pytest.approx(0.88502, abs=1e-3)
        assert payload["kappa3"] < payload["kappa_c"] < payload["kappa1"]

    def test_threshold_degenerate_exits_2(self, capsys):
        code, _, err = run(capsys, "critical", "--d", "3", "--m", "0.3333333333")
        assert code == 2
        assert "threshold" in err

    def test_invalid_m_exits_2(self, capsys):
        code, _, err = run(capsys, "critical", "--d", "3", "--m", "1.5")
        assert code == 2
        assert "error:" in err


class TestSweep:
    def test_deterministic_output(self, tmp_path):
        paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
        for path in paths:
            code = main(
                [
                    "sweep", "--d", "3", "--m", "0.25",
                    "--kappa-min", "8", "--kappa-max", "16",
                    "--steps", "33", "--out", str(path),
                ]
            )
            assert code == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_case_ii_branch_handoff(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--d", "3", "--m", "0.25",
            "--kappa-min", "9", "--kappa-max", "18", "--steps", "61",
        )
        assert code == 0
        rows = read_sweep(out)
        k1, k2 = eq.kappa1(3, 0.25), eq.kappa2(3, 0.25)
        supported = [r["kappa"] for r in rows if r["branch"] == "fully_supported"]
        singular = [r["kappa"] for r in rows if r["branch"] == "singular_upper"]
        assert max(supported) < k2 <= min(singular)
        assert min(supported) > k1
        assert not any(r["branch"] == "singular_lower" for r in rows)

    def test_case_iii_fold_window(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--d", "5", "--m", "0.3",
            "--kappa-min", "15", "--kappa-max", "21", "--steps", "121",
        )
        assert code == 0
        rows = read_sweep(out)
        crit = {"k1": eq.kappa1(5, 0.3), "k2": eq.kappa2(5, 0.3)}
        k3, _ = eq.kappa3_and_alpha_bar(5, 0.3)
        lower = [r["kappa"] for r in rows if r["branch"] == "singular_lower"]
        upper = [r["kappa"] for r in rows if r["branch"] == "singular_upper"]
        supported = [r["kappa"] for r in rows if r["branch"] == "fully_supported"]
        assert min(lower) >= k3 and max(lower) < crit["k2"]
        assert min(upper) >= k3
        assert min(supported) > crit["k2"] and max(supported) < crit["k1"]

    def test_com_norm_identity_and_uniform_rows(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--d", "5", "--m", "0.3",
            "--kappa-min", "16", "--kappa-max", "20", "--steps", "17",
        )
        assert code == 0
        rows = read_sweep(out)
        sb = eq.s_bar(5, 0.3)
        for row in rows:
            if row["branch"] == "uniform":
                assert row["com_norm"] == 0.0
            if row["branch"] in ("singular_upper", "singular_lower"):
                expected = row["alpha"] + (1.0 - row["alpha"]) * sb
                assert abs(row["com_norm"] - expected) <= 1e-12

    def test_rows_sorted_by_kappa_then_branch(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--d", "2", "--m", "0.5",
            "--kappa-min", "4", "--kappa-max", "8", "--steps", "9",
        )
        assert code == 0
        rows = read_sweep(out)
        keys = [(r["kappa"], r["branch"]) for r in rows]
        assert keys == sorted(keys)

    def test_log_grid(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--d", "2", "--m", "0.5",
            "--kappa-min", "1", "--kappa-max", "100", "--steps", "5", "--log-grid",
        )
        assert code == 0
        kappas = sorted({r["kappa"] for r in read_sweep(out)})
        assert kappas == pytest.approx([1.0, math.sqrt(10), 10.0, 10 * math.sqrt(10), 100.0])

    def test_json_format(self, capsys):
        code, out, _ = run(
            capsys,
            "sweep", "--d", "2", "--m", "0.5",
            "--kappa-min", "4", "--kappa-max", "6", "--steps", "3",
            "--format", "json",
        )
        assert code == 0
        payload = json.loads(out)
        assert all(row["branch"] in ("uniform", "fully_supported") for row in payload)

    def test_invalid_range_exits_2(self, capsys):
        code, _, err = run(
            capsys,
            "sweep", "--d", "2", "--m", "0.5",
            "--kappa-min", "5", "--kappa-max", "4", "--steps", "10",
        )
        assert code == 2
        assert "error:" in err

    def test_unsolvable_samples_become_nan_rows(self, capsys, monkeypatch):
        def broken(kappa, d, m, rel_tol=1e-10, root_tol=1e-12):
            raise BracketFailureError("injected solver failure")

        monkeypatch.setattr(eq, "fully_supported_state", broken)
        code, out, err = run(
            capsys,
            "sweep", "--d", "2", "--m", "0.5",
            "--kappa-min", "6", "--kappa-max", "8", "--steps", "3",
        )
        assert code == 0
        assert "nan" in out
        assert "3 kappa samples failed" in err


class TestProfile:
    def test_flat_near_branch_birth(self, capsys):
        kappa = eq.kappa1(2, 0.5) * 1.000001
        code, out, _ = run(
            capsys,
            "profile", "--d", "2", "--m", "0.5",
            "--kappa", repr(kappa), "--points", "11",
        )
        assert code == 0
        values = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
        assert max(values) / min(values) - 1.0 <= 1e-2

    def test_concentration_at_large_kappa(self, capsys):
        code, out, _ = run(
            capsys,
            "profile", "--d", "2", "--m", "0.5", "--kappa", "20", "--points", "101",
        )
        assert code == 0
        values = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
        assert values[0] / values[-1] > 10.0

    def test_rho_bar_profile(self, capsys):
        # (5, 0.3): the weighted integrand vanishes at theta = 0, so the
        # coarse trapezoid converges; border-singular pairs like (3, 0.25)
        # would need millions of samples for the same tolerance
        code, out, _ = run(
            capsys,
            "profile", "--d", "5", "--m", "0.3",
            "--branch", "rho_bar", "--points", "2001",
        )
        assert code == 0
        lines = out.strip().splitlines()[1:]
        assert lines[0].split(",")[1] == "inf"
        theta = np.array([float(line.split(",")[0]) for line in lines[1:]])
        dens = np.array([float(line.split(",")[1]) for line in lines[1:]])
        dwd = 5.0 * sphere_geometry(5).ball_volume_wd
        weighted = dens * np.sin(theta) ** 4
        trapezoid = 0.5 * np.sum((weighted[1:] + weighted[:-1]) * np.diff(theta))
        assert dwd * trapezoid == pytest.approx(1.0, abs=1e-2)

    def test_out_of_window_prints_interval(self, capsys):
        code, _, err = run(
            capsys, "profile", "--d", "2", "--m", "0.5", "--kappa", "3", "--points", "5"
        )
        assert code == 2
        assert "window" in err and "5.317" in err


class TestVerify:
    def test_default_run_passes(self, capsys):
        code, out, _ = run(capsys, "verify")
        assert code == 0
        assert "FAIL" not in out
        assert "12.4453" in out  # the reported-value discrepancy note
        assert "closed form 14.05" in out

    def test_loosened_tolerances_still_pass(self, capsys):
        code, out, _ = run(capsys, "verify", "--rel-tol", "1e-1")
        assert code == 0
        assert "FAIL" not in out

    def test_sign_flip_canary_fails(self, capsys, monkeypatch):
        # a corrupted branch function must be caught by the suite
        original = eq.inverse_kappa

        def flipped(eta, d, m, rel_tol=1e-10):
            return -original(eta, d, m, rel_tol)

        monkeypatch.setattr(eq, "inverse_kappa", flipped)
        code, out, _ = run(capsys, "verify")
        assert code == 1
        assert "FAIL" in out

    def test_bad_tolerance_exits_2(self, capsys):
        code, _, err = run(capsys, "verify", "--rel-tol", "-1")
        assert code == 2
        assert "error:" in err
