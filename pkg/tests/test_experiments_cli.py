import math
import os
import re
import subprocess
import sys

import numpy as np
import pytest

from qgraphs.cli import main as cli_main
from qgraphs.experiments import ExperimentSpec, run
from qgraphs.serialization import (
    BOUNDS_SCHEMA,
    LOCALIZATION_SCHEMA,
    MEAN_ENTROPY_SCHEMA,
    STAR_AVERAGE_SCHEMA,
    load_quantum_graph,
    load_spectrum,
    read_csv,
    read_json,
)


def _strip_timestamp(text: str) -> str:
    return re.sub(r"# generated: .*", "# generated: X", text)


class TestSpecValidation:
    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            ExperimentSpec(kind="nope")

    def test_bad_lengths(self):
        with pytest.raises(ValueError):
            ExperimentSpec(kind="spectrum", length_lo=0.0)

    def test_bad_window(self):
        with pytest.raises(ValueError):
            ExperimentSpec(kind="spectrum", k_min=2.0, k_max=1.0)

    def test_hash_depends_on_fields(self):
        a = ExperimentSpec(kind="spectrum", seed=1)
        b = ExperimentSpec(kind="spectrum", seed=2)
        assert a.hash() != b.hash()


class TestEntropyHistogram:
    def test_outputs_and_determinism(self, tmp_path):
        spec = ExperimentSpec(kind="entropy-histogram", family="star", sizes=(5,),
                              boundary="neumann", k_min=1.0, n_eigen=40,
                              seed=3, out_dir=str(tmp_path / "a"), label="t")
        res1 = run(spec)
        text1 = _strip_timestamp(open(res1.paths["entropy_csv"]).read())

        spec2 = ExperimentSpec(**{**spec.resolved(), "out_dir": str(tmp_path / "b")})
        res2 = run(spec2)
        text2 = _strip_timestamp(open(res2.paths["entropy_csv"]).read())
        assert text1 == text2

        cols, meta = read_csv(res1.paths["entropy_csv"])
        assert meta["spec-hash"] == spec.hash()
        assert len(cols["k_n"]) == res1.summary["n_eigen"]
        assert np.all(cols["normalized_entropy"] <= 1.0)
        qg = load_quantum_graph(res1.paths["graph"])
        records, header = load_spectrum(res1.paths["spectrum"])
        assert header["size"] == 5
        assert len(records) == len(cols["k_n"])

    def test_et_summary_carries_bound(self, tmp_path):
        spec = ExperimentSpec(kind="entropy-histogram", family="star", sizes=(6,),
                              boundary="equitransmitting", k_min=1.0, n_eigen=25,
                              seed=4, out_dir=str(tmp_path), label="et")
        res = run(spec)
        doc = read_json(res.paths["summary"], schema="qgraphs/entropy-scatter@1")
        assert "et_star_bound" in doc["bounds"]
        B = doc["bounds"]["bond_count"]
        assert doc["bounds"]["et_star_bound"] == pytest.approx(
            0.5 * math.log(B - 2) / math.log(B))


class TestMeanEntropy:
    def test_rows_and_fit(self, tmp_path):
        spec = ExperimentSpec(kind="mean-entropy-vs-size", family="star",
                              sizes=(4, 6, 8), boundary="neumann", n_eigen=30,
                              seed=5, out_dir=str(tmp_path), label="m")
        res = run(spec)
        doc = read_json(res.paths["summary"], MEAN_ENTROPY_SCHEMA)
        assert len(doc["rows"]) == 3
        assert "fit_alpha" in doc and "fit_beta" in doc
        assert "c_neumann" in doc
        for row in doc["rows"]:
            assert row["variance_bound"] == pytest.approx(
                1 - row["mean_variance"] / math.log(row["bond_count"]))

    def test_threads_match_serial(self, tmp_path):
        base = dict(kind="mean-entropy-vs-size", family="star", sizes=(4, 5),
                    boundary="neumann", n_eigen=15, seed=6, label="m")
        r1 = run(ExperimentSpec(**base, out_dir=str(tmp_path / "s"), threads=1))
        r2 = run(ExperimentSpec(**base, out_dir=str(tmp_path / "p"), threads=2))
        d1 = read_json(r1.paths["summary"], MEAN_ENTROPY_SCHEMA)
        d2 = read_json(r2.paths["summary"], MEAN_ENTROPY_SCHEMA)
        assert d1["rows"] == d2["rows"]


class TestStarAverage:
    def test_summary_and_csv(self, tmp_path):
        spec = ExperimentSpec(kind="star-average", family="star", sizes=(12,),
                              n_eigen=1000, seed=7, out_dir=str(tmp_path), label="s")
        res = run(spec)
        doc = read_json(res.paths["summary"], STAR_AVERAGE_SCHEMA)
        row = doc["rows"][0]
        assert row["n_eigen"] == 1000
        assert 0 < row["weighted_average_a"] < 1
        assert row["ks_distance"] < 0.2
        cols, _ = read_csv(res.paths["star_csv_12"])
        assert len(cols["k_n"]) == 1000
        # the identity between the edge and bond entropies holds row-wise
        e = 12
        lhs = cols["S_N_a"]
        rhs = (math.log(e) * cols["S_N_A"] + math.log(2)) / (math.log(e) + math.log(2))
        assert np.abs(lhs - rhs).max() < 1e-12

    def test_regular_family_rejected(self):
        with pytest.raises(ValueError):
            run(ExperimentSpec(kind="star-average", family="regular", sizes=(10,),
                               n_eigen=1000))


class TestBoundsReport:
    def test_no_violations_on_valid_graph(self, tmp_path):
        spec = ExperimentSpec(kind="bounds-report", family="star", sizes=(6,),
                              boundary="equitransmitting", k_min=1.0, n_eigen=30,
                              seed=8, out_dir=str(tmp_path), label="b")
        res = run(spec)
        assert res.violations == ()
        doc = read_json(res.paths["summary"], BOUNDS_SCHEMA)
        by_name = {row["bound_name"]: row for row in doc["bounds"]}
        assert by_name["variance"]["satisfied"]
        assert by_name["variance"]["min_margin_over_spectrum"] >= -1e-12
        assert by_name["et-star"]["satisfied"]
        assert "skipped" in by_name["girth"]


class TestLocalization:
    def test_paper_numbers(self, tmp_path):
        spec = ExperimentSpec(kind="localization", family="star", sizes=(120,),
                              force_lmax=9.9691, seed=9, out_dir=str(tmp_path),
                              label="loc")
        res = run(spec)
        doc = read_json(res.paths["summary"], LOCALIZATION_SCHEMA)
        assert doc["l_max"] == pytest.approx(9.9691)
        assert doc["prediction"] == pytest.approx(math.pi / (2 * 9.9691))
        assert 0.155 <= doc["k1"] <= 0.161
        assert doc["relative_gap"] < 0.03
        cols, _ = read_csv(res.paths["masses_csv"])
        assert len(cols["mass"]) == 120
        assert cols["mass"].sum() == pytest.approx(1.0, abs=1e-9)


class TestCli:
    def test_constants_command(self, capsys):
        assert cli_main(["constants"]) == 0
        out = capsys.readouterr().out
        assert "0.692032962" in out
        assert "plain (default)" in out

    def test_localize_command(self, tmp_path, capsys):
        rc = cli_main(["localize", "--size", "40", "--force-lmax", "9.9691",
                       "--seed", "2", "--out-dir", str(tmp_path),
                       "--figure", str(tmp_path / "loc.png")])
        assert rc == 0
        assert (tmp_path / "loc.png").exists()
        assert (tmp_path / "localization-localization.json").exists()

    def test_entropy_command_with_figure(self, tmp_path):
        rc = cli_main(["entropy", "--family", "star", "--sizes", "5",
                       "--n-eigen", "25", "--seed", "3",
                       "--out-dir", str(tmp_path),
                       "--figure", str(tmp_path / "fig.png")])
        assert rc == 0
        assert (tmp_path / "fig.png").exists()

    def test_generate_and_parameter_error(self, tmp_path):
        out = tmp_path / "g.json"
        rc = cli_main(["generate", "--family", "star", "--size", "4",
                       "--output", str(out)])
        assert rc == 0
        assert load_quantum_graph(out).graph.vertex_count == 5
        # invalid: regular graph with odd n * d
        rc = cli_main(["generate", "--family", "regular", "--size", "7",
                       "--degree", "3", "--output", str(out)])
        assert rc == 2

    def test_bounds_exit_code_on_valid_spectrum(self, tmp_path):
        rc = cli_main(["bounds", "--family", "star", "--sizes", "6",
                       "--boundary", "equitransmitting", "--n-eigen", "20",
                       "--seed", "4", "--out-dir", str(tmp_path)])
        assert rc == 0

    def test_config_file_with_flag_override(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("size = 30\nforce-lmax = 9.9691\nseed = 5\n")
        rc = cli_main(["localize", "--config", str(cfg), "--size", "25",
                       "--out-dir", str(tmp_path)])
        assert rc == 0
        doc = read_json(tmp_path / "localization-localization.json",
                        LOCALIZATION_SCHEMA)
        # flag wins over config for size; config supplies force_lmax
        assert doc["size"] == 25
        assert doc["l_max"] == pytest.approx(9.9691)

    def test_unknown_config_key(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("nonsense = 1\n")
        rc = cli_main(["localize", "--config", str(cfg)])
        assert rc == 2

    def test_entry_point_runs(self):
        proc = subprocess.run([sys.executable, "-m", "qgraphs.cli", "constants"],
                              capture_output=True, text=True)
        assert proc.returncode == 0
        assert "0.692032962" in proc.stdout


class TestFigures:
    def test_all_four_kinds_render(self, tmp_path):
        from qgraphs import figures

        out = tmp_path / "figs"
        out.mkdir()
        # entropy scatter
        spec = ExperimentSpec(kind="entropy-histogram", family="star", sizes=(6,),
                              boundary="equitransmitting", n_eigen=25, seed=11,
                              out_dir=str(tmp_path), label="f1")
        res = run(spec)
        p1 = figures.render_entropy_scatter(res.paths["entropy_csv"],
                                            out / "f1.png",
                                            summary_json=res.paths["summary"])
        # mean entropy vs size
        spec = ExperimentSpec(kind="mean-entropy-vs-size", family="star",
                              sizes=(4, 6), boundary="neumann", n_eigen=15,
                              seed=12, out_dir=str(tmp_path), label="f2")
        res = run(spec)
        p2 = figures.render_mean_entropy_vs_size(res.paths["summary"], out / "f2.png")
        # localized state
        spec = ExperimentSpec(kind="localization", family="star", sizes=(30,),
                              force_lmax=9.9691, seed=13, out_dir=str(tmp_path),
                              label="f3")
        res = run(spec)
        p3 = figures.render_localized_state(res.paths["masses_csv"], out / "f3.png",
                                            summary_json=res.paths["summary"])
        # sec^2 histogram with density overlay
        spec = ExperimentSpec(kind="star-average", family="star", sizes=(10,),
                              n_eigen=1000, seed=14, out_dir=str(tmp_path),
                              label="f4")
        res = run(spec)
        p4 = figures.render_sec2_histogram(res.paths["star_csv_10"],
                                           res.paths["summary"], out / "f4.png",
                                           size=10)
        for p in (p1, p2, p3, p4):
            assert os.path.getsize(p) > 5000

    def test_schema_mismatch_refused(self, tmp_path):
        from qgraphs import figures
        from qgraphs.errors import SchemaError
        from qgraphs.serialization import write_csv

        bad = tmp_path / "bad.csv"
        write_csv(bad, "qgraphs/star-spectrum@1", {"k_n": [1.0]})
        with pytest.raises(SchemaError):
            figures.render_entropy_scatter(bad, tmp_path / "no.png")
