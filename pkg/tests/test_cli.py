"""Command-line interface: exit codes, CSV stability, figures, determinism."""

import numpy as np
import pytest

from fgdistill.cli import main
from fgdistill.covariance import CovarianceMatrix, save_covariance, standard_projection
from helpers import vacuum_covariance


@pytest.fixture
def entangled_file(tmp_path):
    path = tmp_path / "entangled.cov"
    save_covariance(standard_projection(2).covariance(), path)
    return str(path)


@pytest.fixture
def product_file(tmp_path):
    path = tmp_path / "product.cov"
    save_covariance(vacuum_covariance(2, 2), path)
    return str(path)


class TestSweep:
    def test_row_count_and_header(self, tmp_path, capsys):
        out = tmp_path / "rows.csv"
        assert main(["sweep", "--d", "2:9", "--keep", "2", "--out", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "d,n_keep,f_plus,f_minus,p,f,distillable,rate,rate_per_site"
        assert len(lines) == 9  # header + 8 rows

    def test_conservative_rate_never_higher(self, tmp_path):
        out_m = tmp_path / "measured.csv"
        out_c = tmp_path / "conservative.csv"
        assert main(["sweep", "--d", "2:6", "--out", str(out_m)]) == 0
        assert main(["sweep", "--d", "2:6", "--conservative-p", "--out", str(out_c)]) == 0
        for lm, lc in zip(
            out_m.read_text().splitlines()[1:], out_c.read_text().splitlines()[1:]
        ):
            rate_m = float(lm.split(",")[7])
            rate_c = float(lc.split(",")[7])
            assert lc.split(",")[4] == "1"
            assert rate_c <= rate_m + 1e-12

    def test_byte_identical_reruns(self, tmp_path):
        out1 = tmp_path / "a.csv"
        out2 = tmp_path / "b.csv"
        main(["sweep", "--d", "2:10", "--out", str(out1)])
        main(["sweep", "--d", "2:10", "--out", str(out2)])
        assert out1.read_bytes() == out2.read_bytes()

    def test_plot_data_file(self, tmp_path):
        out = tmp_path / "rows.csv"
        dat = tmp_path / "curve.dat"
        main(["sweep", "--d", "2:5", "--out", str(out), "--plot-data", str(dat)])
        lines = dat.read_text().strip().split("\n")
        assert lines[0].startswith("#")
        assert len(lines) == 5
        d_val, rate_val = lines[1].split()
        assert int(d_val) == 2
        float(rate_val)

    def test_figure_rendering(self, tmp_path):
        out = tmp_path / "rows.csv"
        fig = tmp_path / "curve.png"
        assert main(["sweep", "--d", "2:5", "--out", str(out), "--figure", str(fig)]) == 0
        assert fig.exists() and fig.stat().st_size > 1000

    def test_unwritable_output(self, tmp_path):
        assert main(["sweep", "--d", "2:4", "--out", str(tmp_path / "nope" / "x.csv")]) == 1

    def test_invalid_range(self):
        assert main(["sweep", "--d", "9:2"]) == 1

    def test_quadrature_resolution_flag(self, tmp_path):
        out_q = tmp_path / "quad.csv"
        out_c = tmp_path / "closed.csv"
        main(["sweep", "--d", "2:4", "--resolution", "16384", "--out", str(out_q)])
        main(["sweep", "--d", "2:4", "--resolution", "0", "--out", str(out_c)])
        for lq, lc in zip(
            out_q.read_text().splitlines()[1:], out_c.read_text().splitlines()[1:]
        ):
            assert float(lq.split(",")[5]) == pytest.approx(float(lc.split(",")[5]), abs=1e-8)


class TestReport:
    def test_distillable_state(self, entangled_file, capsys):
        assert main(["report", entangled_file]) == 0
        output = capsys.readouterr().out
        assert "distillable:       yes" in output
        assert "hashing rate:      1.000000" in output

    def test_product_state_exits_two(self, product_file, capsys):
        assert main(["report", product_file]) == 2
        assert "distillable:       no" in capsys.readouterr().out

    def test_corrupted_file_exits_one(self, tmp_path, capsys):
        path = tmp_path / "corrupt.cov"
        path.write_text("2 2\nnot numbers\n")
        assert main(["report", str(path)]) == 1

    def test_invalid_covariance_exits_one(self, tmp_path, capsys):
        # antisymmetric but with an unphysical spectrum
        path = tmp_path / "unphysical.cov"
        m = np.zeros((4, 4))
        m[0, 1], m[1, 0] = 1.5, -1.5
        with open(path, "w") as handle:
            handle.write("1 1\n")
            for row in m:
                handle.write(" ".join(f"{v:.17g}" for v in row) + "\n")
        assert main(["report", str(path)]) == 1

    def test_figure_rendering(self, entangled_file, tmp_path, capsys):
        fig = tmp_path / "report.png"
        assert main(["report", entangled_file, "--figure", str(fig)]) == 0
        assert fig.exists() and fig.stat().st_size > 1000

    def test_csv_row_printed(self, entangled_file, capsys):
        main(["report", entangled_file])
        lines = capsys.readouterr().out.strip().split("\n")
        assert lines[-2] == "d,n_keep,f_plus,f_minus,p,f,distillable,rate,rate_per_site"
        assert lines[-1].startswith("2,2,1,")


class TestValidate:
    def test_valid_file(self, entangled_file, capsys):
        assert main(["validate", entangled_file]) == 0
        assert "ok" in capsys.readouterr().out

    def test_missing_file(self, tmp_path):
        assert main(["validate", str(tmp_path / "missing.cov")]) == 1


class TestOracleCompare:
    def test_passes_at_small_size(self, capsys):
        assert main(["oracle-compare", "--d", "1", "--trials", "8", "--seed", "7"]) == 0
        output = capsys.readouterr().out
        assert output.count("[ok]") == 5

    def test_seeded_determinism(self, capsys):
        main(["oracle-compare", "--d", "1", "--trials", "6", "--seed", "11"])
        first = capsys.readouterr().out
        main(["oracle-compare", "--d", "1", "--trials", "6", "--seed", "11"])
        second = capsys.readouterr().out
        assert first == second

    def test_rejects_large_sizes(self, capsys):
        assert main(["oracle-compare", "--d", "4"]) == 1


class TestCsvFormatting:
    def test_twelve_significant_digits(self, tmp_path):
        out = tmp_path / "digits.csv"
        main(["sweep", "--d", "2:2", "--out", str(out)])
        row = out.read_text().splitlines()[1].split(",")
        # f_plus of the d = 2 chain block, frozen to 12 significant digits
        assert row[2] == "0.356769084664"
        assert row[6] in ("true", "false")
