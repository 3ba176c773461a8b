import numpy as np
import pytest

from plotkit.readers import (
    ContractError,
    read_convergence,
    read_diagnostics,
    read_summary,
    read_trajectory,
)

DIAG_HEADER = "t,total_energy,unit_error,tangency_error,momentum_e3"


def g17(x):
    return format(float(x), ".17g")


def write(path, lines):
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


class TestDiagnostics:
    def test_round_trip_exact(self, tmp_path):
        vals = [0.1, -192.47230100000001, 1.1086888498226048e-14, 3e-12, -0.375]
        p = write(tmp_path / "d.csv", [DIAG_HEADER, ",".join(g17(v) for v in vals)])
        cols = read_diagnostics(p)
        for name, v in zip(DIAG_HEADER.split(","), vals):
            assert cols[name][0] == v

    def test_empty_momentum_is_nan(self, tmp_path):
        p = write(tmp_path / "d.csv", [DIAG_HEADER, "0,1,0,0,"])
        assert np.isnan(read_diagnostics(p)["momentum_e3"][0])

    def test_header_only_gives_empty_columns(self, tmp_path):
        p = write(tmp_path / "d.csv", [DIAG_HEADER])
        cols = read_diagnostics(p)
        assert all(len(v) == 0 for v in cols.values())

    def test_rejects_wrong_header(self, tmp_path):
        p = write(tmp_path / "d.csv", ["t,energy", "0,1"])
        with pytest.raises(ContractError):
            read_diagnostics(p)

    def test_rejects_short_row(self, tmp_path):
        p = write(tmp_path / "d.csv", [DIAG_HEADER, "0,1,0"])
        with pytest.raises(ContractError):
            read_diagnostics(p)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ContractError):
            read_diagnostics(tmp_path / "nope.csv")


class TestTrajectory:
    def test_shapes_and_values(self, tmp_path):
        header = "t,q1x,q1y,q1z,w1x,w1y,w1z,q2x,q2y,q2z,w2x,w2y,w2z"
        row = ",".join(g17(v) for v in [0.5] + list(range(12)))
        t, q, w = read_trajectory(write(tmp_path / "t.csv", [header, row]))
        assert t.tolist() == [0.5]
        assert q.shape == (1, 2, 3) and w.shape == (1, 2, 3)
        assert q[0, 1].tolist() == [6.0, 7.0, 8.0]
        assert w[0, 0].tolist() == [3.0, 4.0, 5.0]

    def test_rejects_odd_column_count(self, tmp_path):
        p = write(tmp_path / "t.csv", ["t,q1x,q1y,q1z", "0,1,0,0"])
        with pytest.raises(ContractError):
            read_trajectory(p)


class TestConvergence:
    def test_columns(self, tmp_path):
        p = write(tmp_path / "c.csv", [
            "h,final_error,mean_abs_energy_dev,mean_unit_error",
            "0.001,0.04,1e-4,1e-15",
            "0.0005,0.01,2.5e-5,1e-15",
        ])
        cols = read_convergence(p)
        assert cols["h"].tolist() == [0.001, 0.0005]
        assert cols["final_error"][1] == 0.01

    def test_rejects_wrong_header(self, tmp_path):
        p = write(tmp_path / "c.csv", ["h,err", "0.1,1"])
        with pytest.raises(ContractError):
            read_convergence(p)


class TestSummary:
    def test_reads_required_keys(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text('{"mode": "run", "version": "0.1.0", "backend": "numpy"}')
        assert read_summary(p)["mode"] == "run"

    def test_rejects_missing_keys(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text('{"mode": "run"}')
        with pytest.raises(ContractError):
            read_summary(p)

    def test_rejects_bad_json(self, tmp_path):
        p = tmp_path / "s.json"
        p.write_text("{not json")
        with pytest.raises(ContractError):
            read_summary(p)
