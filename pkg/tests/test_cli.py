import csv
import io
import json

import numpy as np

from qvstrain.andor import AndOrInstance, save_instance
from qvstrain.baselines import classical_version_space_search
from qvstrain.cli import _single_solution_instance, main
from qvstrain.oracles import OracleHandle, from_perceptron
from qvstrain.perceptron import load_dataset

from .conftest import FIXTURE_BITS


def run_cli(*argv) -> tuple[int, str]:
    buf = io.StringIO()
    rc = main(list(argv), out=buf)
    return rc, buf.getvalue()


class TestTrain:
    def test_deterministic_output(self):
        args = ("train", "--n", "10", "--m", "2", "--gamma", "0.3",
                "--trials", "5", "--seed", "21")
        rc1, out1 = run_cli(*args)
        rc2, out2 = run_cli(*args)
        assert rc1 == rc2 == 0
        assert out1 == out2

    def test_rows_carry_ledger_and_flags(self):
        rc, out = run_cli("train", "--n", "8", "--m", "2", "--gamma", "0.3",
                          "--trials", "3", "--seed", "5")
        assert rc == 0
        rows = [json.loads(line) for line in out.strip().splitlines()]
        assert rows[-1]["summary"] is True
        for row in rows[:-1]:
            assert set(row["queries"]) == {
                "bit_oracle", "phase_oracle", "controlled_phase_oracle", "classical_f"
            }
            assert row["in_version_space"] in (True, False, None)

    def test_success_fraction_reasonable(self):
        rc, out = run_cli("train", "--n", "12", "--m", "2", "--gamma", "0.195",
                          "--epsilon", "0.1", "--trials", "20", "--seed", "7")
        assert rc == 0
        summary = json.loads(out.strip().splitlines()[-1])
        assert summary["success_fraction"] >= 0.55

    def test_dataset_file_path(self, tmp_path):
        rc, out = run_cli("gen-dataset", "--n", "10", "--m", "2", "--gamma", "0.25",
                          "--seed", "3", "--out-file", str(tmp_path / "d.txt"))
        assert rc == 0
        rc, out = run_cli("train", "--dataset", str(tmp_path / "d.txt"),
                          "--trials", "2", "--seed", "9")
        assert rc == 0
        rows = [json.loads(line) for line in out.strip().splitlines()]
        assert rows[0]["n"] == 10

    def test_invalid_gamma_exits_2(self):
        rc, _ = run_cli("train", "--n", "8", "--m", "2", "--gamma", "0.0",
                        "--trials", "1", "--seed", "1")
        assert rc == 2

    def test_missing_seed_exits_2(self):
        rc, _ = run_cli("train", "--n", "8", "--m", "2", "--gamma", "0.2")
        assert rc == 2

    def test_workers_match_serial(self):
        args = ("train", "--n", "8", "--m", "2", "--gamma", "0.3",
                "--trials", "4", "--seed", "13")
        _, serial = run_cli(*args)
        _, parallel = run_cli(*args, "--workers", "2")
        assert serial == parallel


class TestVerify:
    def test_default_suites_pass(self):
        rc, out = run_cli("verify", "--tables", "10", "--n-max", "4",
                          "--identity-tables", "5", "--gap-n-max", "9")
        assert rc == 0
        rows = [json.loads(line) for line in out.strip().splitlines()]
        assert rows[-1] == {"ok": True, "summary": True}
        suites = {r["suite"] for r in rows if "suite" in r}
        assert suites == {"sign_and_fidelity", "phase_gap_bound",
                          "controlled_oracle_identity"}

    def test_precision_fault_reports_violation(self):
        rc, out = run_cli("verify", "--tables", "8", "--n-max", "4",
                          "--inject-precision-fault")
        assert rc == 1
        rows = [json.loads(line) for line in out.strip().splitlines()]
        head = rows[0]
        assert head["forced_low_precision"] is True
        assert head["violations"] > 0
        detail = [r for r in rows if "violation" in r]
        assert detail and all("j" in r and "n" in r for r in detail)


class TestSweep:
    def test_degenerate_grid_single_row_no_fit(self):
        rc, out = run_cli("sweep", "--n-grid", "8", "--k-grid", "8",
                          "--trials", "3", "--seed", "2")
        assert rc == 0
        rows = list(csv.reader(io.StringIO(out)))
        kinds = [r[0] for r in rows[1:]]
        assert kinds == ["cell"]

    def test_classical_column_matches_exact_counts(self):
        seed, trials = 17, 3
        rc, out = run_cli("sweep", "--n-grid", "8", "--k-grid", "4",
                          "--trials", str(trials), "--seed", str(seed),
                          "--gamma", "0.2")
        assert rc == 0
        rows = list(csv.reader(io.StringIO(out)))
        cell = [r for r in rows if r[0] == "cell"][0]
        reported_median = float(cell[6])
        counts = []
        for t in range(trials):
            data, planes, _ = _single_solution_instance(8, 4, 0.2, seed + t)
            handle = OracleHandle(from_perceptron(data, planes))
            counts.append(classical_version_space_search(handle).queries["classical_f"])
        assert reported_median == float(np.median(counts))

    def test_deterministic_and_worker_invariant(self):
        args = ("sweep", "--n-grid", "8,16", "--k-grid", "4",
                "--trials", "4", "--seed", "31")
        _, first = run_cli(*args)
        _, second = run_cli(*args)
        assert first == second
        _, parallel = run_cli(*args, "--workers", "2")
        assert parallel == first

    def test_fit_rows_present_for_multi_cell_axis(self):
        rc, out = run_cli("sweep", "--n-grid", "8,16", "--k-grid", "8",
                          "--trials", "3", "--seed", "4")
        rows = list(csv.reader(io.StringIO(out)))
        fits = [r for r in rows if r[0] == "fit"]
        assert len(fits) == 1 and fits[0][-2] == "N"


class TestAndor:
    def test_file_mode_fixture(self, tmp_path):
        z = FIXTURE_BITS.T.reshape(-1)
        path = tmp_path / "inst.txt"
        save_instance(AndOrInstance(4, 3, z), path)
        rc, out = run_cli("andor", "--file", str(path), "--seed", "5")
        assert rc == 0
        row = json.loads(out.strip().splitlines()[0])
        assert row["direct"] == 1 and row["via_search"] == 1 and row["agree"]

    def test_random_batch(self):
        rc, out = run_cli("andor", "--random", "4,4,6", "--seed", "8")
        assert rc == 0
        summary = json.loads(out.strip().splitlines()[-1])
        assert summary["agreement_fraction"] >= 2 / 3

    def test_table_mode_runs_oracle_only_experiment(self, tmp_path):
        from qvstrain.oracles import TruthTable, save_truth_table

        path = tmp_path / "table.txt"
        save_truth_table(TruthTable(FIXTURE_BITS), path)
        rc, out = run_cli("andor", "--table", str(path), "--seed", "6")
        assert rc == 0
        row = json.loads(out.strip().splitlines()[0])
        assert row["N"] == 4 and row["K"] == 3
        assert row["direct"] == 1 and row["via_search"] == 1
        assert row["index"] == 2
        assert row["queries"]["bit_oracle"] > 0

    def test_requires_exactly_one_source(self):
        rc, _ = run_cli("andor", "--seed", "1")
        assert rc == 2
        rc, _ = run_cli("andor", "--file", "x", "--random", "2,2,2", "--seed", "1")
        assert rc == 2
        rc, _ = run_cli("andor", "--file", "x", "--table", "y", "--seed", "1")
        assert rc == 2

    def test_malformed_file_exits_2(self, tmp_path):
        bad = tmp_path / "bad.txt"
        bad.write_text("not a header\n")
        rc, _ = run_cli("andor", "--file", str(bad), "--seed", "1")
        assert rc == 2


class TestGenDataset:
    def test_writes_loadable_file_with_margin(self, tmp_path):
        path = tmp_path / "planted.txt"
        rc, out = run_cli("gen-dataset", "--n", "12", "--m", "2",
                          "--gamma", "0.195", "--seed", "7",
                          "--out-file", str(path))
        assert rc == 0
        info = json.loads(out.strip().splitlines()[0])
        assert info["planted_margin"] >= 0.195
        data = load_dataset(path)
        assert data.n_points == 12 and data.claimed_margin == 0.195

    def test_rejects_bad_gamma(self, tmp_path):
        rc, _ = run_cli("gen-dataset", "--n", "5", "--m", "2", "--gamma", "1.5",
                        "--seed", "1", "--out-file", str(tmp_path / "x.txt"))
        assert rc == 2
