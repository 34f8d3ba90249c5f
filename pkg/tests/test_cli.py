import json

import pytest
import yaml

from nacgen.cli import main

from conftest import WALKTHROUGH_OUTCOMES


def write_config(path, data):
    path.write_text(yaml.safe_dump(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def walk_config(tmp_path):
    return write_config(
        tmp_path / "walk.yaml",
        {
            "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
            "scenarios": {
                "source": "explicit",
                "outcomes": [list(v) for v in WALKTHROUGH_OUTCOMES],
            },
            "output_dir": str(tmp_path / "out"),
        },
    )


@pytest.fixture
def sample_config(tmp_path):
    return write_config(
        tmp_path / "sample.yaml",
        {
            "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
            "scenarios": {"source": "sample", "count": 12, "seed": 1},
            "case_study": "two-drug-extended",
            "repetitions": 3,
            "output_dir": str(tmp_path / "out"),
        },
    )


class TestSample:
    def test_deterministic_file(self, sample_config, tmp_path, capsys):
        assert main(["sample", "--config", sample_config]) == 0
        first = (tmp_path / "out" / "scenarios.txt").read_bytes()
        assert main(["sample", "--config", sample_config]) == 0
        assert (tmp_path / "out" / "scenarios.txt").read_bytes() == first
        assert first.decode().splitlines()[0] == "2 3 3"

    def test_count_too_large_is_validation_error(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "bad.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
                "scenarios": {"source": "sample", "count": 17, "seed": 1},
                "output_dir": str(tmp_path / "out"),
            },
        )
        assert main(["sample", "--config", cfg]) == 1


class TestReduce:
    def test_walkthrough_summary(self, walk_config, tmp_path, capsys):
        assert main(["reduce", "--config", walk_config]) == 0
        out = capsys.readouterr().out
        assert "5 pairs (full: 15)" in out
        graph = (tmp_path / "out" / "graph.txt").read_text()
        assert graph.splitlines()[0] == "6 5"

    def test_provenance_flag(self, walk_config, tmp_path, capsys):
        assert main(["reduce", "--config", walk_config, "--provenance"]) == 0
        lines = (tmp_path / "out" / "graph.txt").read_text().splitlines()
        assert all(len(ln.split()) == 5 for ln in lines[1:])

    def test_single_scenario_zero_pairs(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "one.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
                "scenarios": {"source": "explicit", "outcomes": [[1, 1]]},
                "output_dir": str(tmp_path / "out"),
            },
        )
        assert main(["reduce", "--config", cfg]) == 0
        assert "0 pairs (full: 0)" in capsys.readouterr().out


class TestVerify:
    def test_good_graph_passes(self, walk_config, tmp_path, capsys):
        assert main(["reduce", "--config", walk_config]) == 0
        graph_path = str(tmp_path / "out" / "graph.txt")
        assert main(["verify", "--config", walk_config, "--graph", graph_path]) == 0
        out = capsys.readouterr().out
        assert "sufficient: yes" in out
        assert "all 5 edges necessary" in out
        report = json.loads((tmp_path / "out" / "verify.json").read_text())
        assert report["sufficient"] is True

    def test_broken_graph_exits_two(self, walk_config, tmp_path, capsys):
        assert main(["reduce", "--config", walk_config]) == 0
        graph_path = tmp_path / "out" / "graph.txt"
        lines = graph_path.read_text().splitlines()
        n, m = lines[0].split()
        dropped = [f"{n} {int(m) - 1}"] + lines[2:]
        graph_path.write_text("\n".join(dropped) + "\n")
        code = main(["verify", "--config", walk_config, "--graph", str(graph_path)])
        assert code == 2
        out = capsys.readouterr().out
        assert "violation at cut" in out

    def test_missing_graph_is_validation_error(self, walk_config, tmp_path):
        code = main(
            ["verify", "--config", walk_config, "--graph", str(tmp_path / "no.txt")]
        )
        assert code == 1


class TestEmit:
    def test_full_pairs_row_count(self, sample_config, tmp_path, capsys):
        assert main(["emit", "--config", sample_config, "--pairs", "full"]) == 0
        out = capsys.readouterr().out
        assert "NAC rows: 3192" in out
        assert (tmp_path / "out" / "model.lp").exists()

    def test_snac_pairs_and_mps(self, sample_config, tmp_path, capsys):
        code = main(
            ["emit", "--config", sample_config, "--pairs", "snac", "--format", "mps"]
        )
        assert code == 0
        assert (tmp_path / "out" / "model.mps").exists()

    def test_emission_deterministic(self, sample_config, tmp_path):
        assert main(["emit", "--config", sample_config, "--pairs", "full"]) == 0
        first = (tmp_path / "out" / "model.lp").read_bytes()
        assert main(["emit", "--config", sample_config, "--pairs", "full"]) == 0
        assert (tmp_path / "out" / "model.lp").read_bytes() == first

    def test_exogenous_parameter_rejected(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "exo.yaml",
            {
                "parameters": [
                    {"kind": "stage_failure", "stages": 3},
                    {
                        "kind": "split_chain",
                        "partitions": [
                            [[1, 2, 3, 4]],
                            [[1, 2], [3, 4]],
                            [[1], [2], [3], [4]],
                        ],
                        "schedule": [1, 2],
                    },
                ],
                "scenarios": {"source": "sample", "count": 6, "seed": 1},
                "case_study": "two-drug-extended",
                "output_dir": str(tmp_path / "out"),
            },
        )
        assert main(["emit", "--config", cfg, "--pairs", "full"]) == 1
        err = capsys.readouterr().err
        assert "decision-dependent" in err

    def test_emit_without_case_is_validation_error(self, walk_config):
        assert main(["emit", "--config", walk_config, "--pairs", "full"]) == 1


class TestBench:
    def test_single_repetition_average_equals_max(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "b1.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
                "scenarios": {"source": "sample", "count": 12, "seed": 1},
                "case_study": "two-drug-extended",
                "repetitions": 1,
                "output_dir": str(tmp_path / "out"),
            },
        )
        assert main(["bench", "--config", cfg]) == 0
        row = json.loads((tmp_path / "out" / "bench.json").read_text())
        assert row["pairs_avg"] == row["pairs_max"]
        assert row["pairs_full"] == 66
        assert row["nacs_full"] == 3192

    def test_full_source_seed_independent(self, tmp_path):
        base = {
            "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
            "scenarios": {"source": "full"},
            "case_study": "two-drug-extended",
            "repetitions": 2,
            "output_dir": str(tmp_path / "out"),
        }
        cfg = write_config(tmp_path / "bf.yaml", base)
        assert main(["bench", "--config", cfg]) == 0
        first = json.loads((tmp_path / "out" / "bench.json").read_text())
        assert main(["bench", "--config", cfg, "--seed", "999"]) == 0
        second = json.loads((tmp_path / "out" / "bench.json").read_text())
        for key in ("pairs_avg", "pairs_max", "pairs_full", "nacs_full"):
            assert first[key] == second[key]

    def test_repetitions_expand_seed(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "b3.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3, "count": 2}],
                "scenarios": {"source": "sample", "count": 12, "seed": 1},
                "repetitions": 5,
                "output_dir": str(tmp_path / "out"),
            },
        )
        assert main(["bench", "--config", cfg]) == 0
        row = json.loads((tmp_path / "out" / "bench.json").read_text())
        assert row["repetitions"] == 5
        assert row["pairs_max"] >= row["pairs_avg"]


class TestConfigValidation:
    def test_unknown_top_level_key(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "u.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3}],
                "scenarios": {"source": "full"},
                "bogus": True,
            },
        )
        assert main(["reduce", "--config", cfg]) == 1
        assert "unknown keys" in capsys.readouterr().err

    def test_unknown_scenario_key(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "u2.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3}],
                "scenarios": {"source": "full", "seed": 3},
            },
        )
        assert main(["reduce", "--config", cfg]) == 1

    def test_case_drug_count_mismatch(self, tmp_path, capsys):
        cfg = write_config(
            tmp_path / "u3.yaml",
            {
                "parameters": [{"kind": "stage_failure", "stages": 3, "count": 3}],
                "scenarios": {"source": "full"},
                "case_study": "two-drug-extended",
            },
        )
        assert main(["bench", "--config", cfg]) == 1

    def test_usage_error_exits_one(self, capsys):
        assert main(["reduce"]) == 1

    def test_missing_config_file(self, capsys):
        assert main(["reduce", "--config", "/nonexistent/x.yaml"]) == 1
