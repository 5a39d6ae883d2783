import json

import pytest

from masckit.cli import main

CHAIN_GRAPH = "6 7\n0 1\n1 2\n0 2\n2 3\n3 4\n4 5\n5 1\n"
TRIANGLE = "3 3\n-1 0 1\n1 -1 0\n0 1 -1\n"


@pytest.fixture
def graph_file(tmp_path):
    p = tmp_path / "g.txt"
    p.write_text(CHAIN_GRAPH)
    return str(p)


@pytest.fixture
def matrix_file(tmp_path):
    p = tmp_path / "m.txt"
    p.write_text(TRIANGLE)
    return str(p)


class TestRecoverRate:
    def test_recover(self, matrix_file, tmp_path, capsys):
        sig = tmp_path / "x.txt"
        sig.write_text("3 1\n4/5\n0\n0\n")
        assert main(["recover", "--matrix", matrix_file, "--signal", str(sig)]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["recovered"]
        assert out["x_hat"] == pytest.approx([0.8, 0.0, 0.0], abs=1e-9)

    def test_rate_csv_row(self, matrix_file, capsys):
        code = main(
            ["rate", "--matrix", matrix_file, "--sparsity", "1",
             "--trials", "20", "--seed", "3"]
        )
        assert code == 0
        s, trials, successes, rate = capsys.readouterr().out.strip().split(",")
        assert (s, trials, successes, rate) == ("1", "20", "20", "1")

    def test_missing_file_usage_error(self, capsys):
        assert main(["rate", "--matrix", "/nonexistent", "--sparsity", "1",
                     "--trials", "1"]) == 2


class TestGraphCommands:
    def test_girth(self, graph_file, capsys):
        assert main(["graph", "girth", graph_file]) == 0
        assert capsys.readouterr().out.strip() == "3"

    def test_cycles(self, graph_file, capsys):
        assert main(["graph", "cycles", graph_file]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0] == "0 1 2"
        assert len(lines) == 3

    def test_masc_check_in(self, graph_file, capsys):
        assert main(["graph", "masc-check", graph_file, "--support", "0,4"]) == 0
        assert json.loads(capsys.readouterr().out)["verdict"] == "in"

    def test_masc_check_out(self, graph_file, capsys):
        assert main(["graph", "masc-check", graph_file, "--support", "0,1"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] == "out" and out["witness_support"] == [0, 1, 2]

    def test_cycle_cap_budget_exit(self, graph_file, capsys):
        assert main(["graph", "cycles", graph_file, "--cap", "1"]) == 3

    def test_er_deterministic(self, capsys):
        assert main(["graph", "er", "--vertices", "10", "--p", "0.5",
                     "--seed", "7"]) == 0
        first = capsys.readouterr().out
        main(["graph", "er", "--vertices", "10", "--p", "0.5", "--seed", "7"])
        assert capsys.readouterr().out == first


class TestDftCommands:
    def test_bound(self, capsys):
        assert main(["dft", "bound", "--n", "19", "--mbar", "7"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["bound"] == 2.375 and out["s_guaranteed"] == 2

    def test_masc_check(self, capsys):
        assert main(["dft", "masc-check", "--n", "11", "--omega", "0,2,4,7,9",
                     "--support", "0,5"]) == 0
        out = json.loads(capsys.readouterr().out)
        assert out["verdict"] == "out" and len(out["worst_gamma"]) == 6

    def test_mrsl_exact(self, capsys):
        assert main(["dft", "mrsl", "--n", "19", "--mbar", "7", "--exact"]) == 0
        assert json.loads(capsys.readouterr().out)["s_max"] == 3

    def test_mrsl_sampled(self, capsys):
        assert main(["dft", "mrsl", "--n", "19", "--mbar", "7",
                     "--samples", "100", "--seed", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["mode"] == "sampled"

    def test_exact_over_budget_exit(self, capsys):
        assert main(["dft", "mrsl", "--n", "61", "--mbar", "15", "--exact",
                     "--budget", "100"]) == 3

    def test_nonprime_usage_exit(self, capsys):
        assert main(["dft", "bound", "--n", "9", "--mbar", "2"]) == 2


class TestUsage:
    def test_no_args(self, capsys):
        assert main([]) == 2

    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == 2

    def test_bad_support_list(self, graph_file, capsys):
        assert main(["graph", "masc-check", graph_file, "--support", "a,b"]) == 2


class TestExperimentCommand:
    def test_custom_experiment(self, matrix_file, tmp_path, capsys):
        csv = tmp_path / "out.csv"
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({
            "kind": "custom",
            "parameters": {"matrix_file": matrix_file, "sparsities": [1],
                           "trials": 10},
            "output_csv": str(csv),
        }))
        assert main(["experiment", "--config", str(cfg)]) == 0
        lines = csv.read_text().splitlines()
        assert lines[0].startswith("#")
        assert lines[2] == "sparsity,trials,seed,rate"

    def test_bad_config_usage(self, tmp_path, capsys):
        cfg = tmp_path / "cfg.json"
        cfg.write_text("{not json")
        assert main(["experiment", "--config", str(cfg)]) == 2
