"""Tests for the command-line interface layer."""

from __future__ import annotations

import io
import json

import pytest

from app.cli import EXIT_ERROR, EXIT_OK, EXIT_USAGE, TopologyCLI, main
from app.config import get_config
from app.results import ResultsTable


class Runner:
    """Runs the CLI against in-memory streams."""

    def __init__(self):
        self.out = io.StringIO()
        self.err = io.StringIO()
        self.cli = TopologyCLI(output_stream=self.out, error_stream=self.err)

    def __call__(self, *argv):
        self.out.seek(0)
        self.out.truncate()
        self.err.seek(0)
        self.err.truncate()
        return self.cli.run_command([str(arg) for arg in argv])

    def json(self):
        return json.loads(self.out.getvalue())


@pytest.fixture
def run():
    return Runner()


@pytest.fixture
def machine_file(run, tmp_path):
    """K3 ⊓ K3 spec written by the build command."""
    path = tmp_path / "machine.json"
    assert run("build", "--base", "complete:3", "--depth", "2", "--out", path) == EXIT_OK
    return path


class TestBuild:
    """Spec, graph and DOT output."""

    def test_spec_output(self, run):
        assert run("build", "--base", "complete:3", "--depth", "3", "--alpha", "0.5") == EXIT_OK
        data = run.json()
        assert data["format"] == "hierarchy-spec"
        assert data["alphas"] == [1, 0.5, 0.25]
        assert data["geometric_alpha"] == 0.5

    def test_mixed_bases_top_first(self, run):
        assert run("build", "--base", "cycle:5", "--base", "star:4", "--alphas", "1", "3",
                   "--format", "graph") == EXIT_OK
        data = run.json()
        assert data["order"] == 20
        assert data["levels"] == [5, 4]

    def test_graph_round_trip(self, run, tmp_path):
        path = tmp_path / "graph.json"
        assert run("build", "--base", "complete:3", "--depth", "2", "--format", "graph", "--out", path) == EXIT_OK
        assert run.out.getvalue() == ""
        assert run("invariants", "--graph", path, "--json") == EXIT_OK
        data = run.json()
        assert data["order"] == 9
        assert data["edge_count"] == 12
        assert data["diameter"] == 3

    def test_truncated(self, run):
        assert run("build", "--base", "complete:3", "--depth", "3", "--truncated", "--format", "graph") == EXIT_OK
        assert run.json()["order"] == 15

    def test_dot(self, run):
        assert run("build", "--topology", "cycle:5", "--format", "dot") == EXIT_OK
        assert "0 [shape=doublecircle];" in run.out.getvalue()

    def test_base_required(self, run):
        assert run("build", "--depth", "2") == EXIT_USAGE
        assert "at least one --base" in run.err.getvalue()

    def test_depth_needs_single_base(self, run):
        assert run("build", "--base", "complete:3", "--base", "cycle:4", "--depth", "2") == EXIT_USAGE

    def test_invalid_spec_is_an_error(self, run):
        assert run("build", "--base", "complete:3", "--base", "cycle:4", "--alphas", "2", "1") == EXIT_ERROR
        assert run.err.getvalue().startswith("Error: [PRODUCT_ERROR]")


class TestAnalysis:
    """Invariants, Cheeger constants, spectra, formulas and Pareto fronts."""

    def test_invariants_text(self, run):
        assert run("invariants", "--topology", "complete:4") == EXIT_OK
        lines = run.out.getvalue().splitlines()
        assert "order: 4" in lines
        assert "label: K4" in lines

    def test_invariants_of_spec_carry_hash(self, run, machine_file):
        assert run("invariants", "--spec", machine_file, "--json") == EXIT_OK
        assert len(run.json()["metadata"]["spec_hash"]) == 64

    def test_cheeger_exact(self, run):
        assert run("cheeger", "--topology", "cycle:6", "--json") == EXIT_OK
        data = run.json()
        assert data["value"] == pytest.approx(2 / 3)
        assert data["mode"] == "exact"

    def test_cheeger_heuristic(self, run):
        assert run("cheeger", "--topology", "path:6", "--mode", "heuristic", "--json") == EXIT_OK
        assert run.json()["value"] == pytest.approx(1 / 3)

    def test_recursive_spectrum_with_bounds(self, run, machine_file):
        assert run("spectrum", "--spec", machine_file, "--method", "recursive", "--bounds", "--json") == EXIT_OK
        data = run.json()
        assert data["method"] == "recursive"
        assert len(data["eigenvalues"]) == 9
        assert data["bounds"]["diameter_lo"] <= 3 <= data["bounds"]["diameter_hi"]

    def test_recursive_spectrum_needs_spec(self, run):
        assert run("spectrum", "--topology", "cycle:5", "--method", "recursive") == EXIT_USAGE

    def test_formulas(self, run):
        assert run("formulas", "--base", "complete:3", "--depth", "2", "--alpha", "2", "--json") == EXIT_OK
        data = run.json()
        assert data["formulas"]["weighted_diameter"] == 4.0
        assert data["formulas"]["max_degree"] == 4
        assert data["complete_base"]["weighted_diameter"] == 4.0
        assert data["complete_base"]["truncated_order"] == 7
        assert data["moore_bound"] == 53.0

    def test_formulas_need_one_base(self, run):
        assert run("formulas", "--base", "complete:3", "--base", "cycle:4", "--alphas", "1", "1") == EXIT_USAGE

    def test_pareto(self, run):
        assert run("pareto", "--topology", "complete:16", "--topology", "cycle:16",
                   "--topology", "grid:2:4", "--json") == EXIT_OK
        data = run.json()
        assert data["front"] == ["complete:16", "cycle:16", "grid:2:4"]
        assert all(row["efficient"] and row["dominated_by"] == [] for row in data["records"])
        assert data["tolerance"] == 0.0

    def test_pareto_standard_comparison(self, run):
        assert run("pareto", "--standard", "--json") == EXIT_OK
        data = run.json()
        assert data["front"] == ["porcupine", "truncated"]
        assert data["mode"] == "scaling"
        complete = next(row for row in data["records"] if row["label"] == "complete")
        assert not complete["efficient"]
        assert complete["dominated_by"]

    def test_pareto_standard_concrete(self, run):
        assert run("pareto", "--standard", "--mode", "concrete", "--json") == EXIT_OK
        data = run.json()
        assert data["mode"] == "concrete"
        assert data["tolerance"] == 0.0
        assert data["front"] == ["complete", "star", "cycle", "grid2d", "porcupine", "hierarchy"]
        assert {row["order"] for row in data["records"]} == {256}

    def test_pareto_concrete_order_must_fit(self, run):
        assert run("pareto", "--standard", "--mode", "concrete", "--order", "100") == EXIT_ERROR
        assert "[VAL_ERROR]" in run.err.getvalue()

    def test_missing_file(self, run, tmp_path):
        assert run("invariants", "--graph", tmp_path / "absent.json") == EXIT_ERROR
        assert "[FILE_ERROR]" in run.err.getvalue()

    def test_no_csv_for_invariants(self, run):
        assert run("invariants", "--topology", "star:4", "--csv") == EXIT_USAGE


class TestExperiments:
    """Seeded GHZ trials and placements."""

    def test_ghz_requires_seed(self, run):
        assert run("ghz", "--topology", "complete:2", "--p0", "0.5") == EXIT_USAGE
        assert "requires --seed" in run.err.getvalue()

    def test_ghz_json(self, run):
        assert run("ghz", "--topology", "complete:2", "--p0", "0.5", "--trials", "50", "--seed", "1", "--json") == EXIT_OK
        data = run.json()
        assert data["trials"] == 50
        assert data["prediction"] == 2.0
        assert data["metadata"]["seed"] == 1
        assert data["metadata"]["start_choice"] == "weighted periphery"
        assert "outcomes" not in data

    def test_ghz_is_reproducible(self, run, machine_file):
        argv = ("ghz", "--spec", machine_file, "--p0", "0.2", "--alpha", "0.5", "--trials", "20", "--seed", "3", "--json")
        assert run(*argv) == EXIT_OK
        first = run.json()
        assert run(*argv) == EXIT_OK
        assert run.json() == first
        assert first["bound_lo"] == pytest.approx(0.2 * first["prediction"])

    def test_ghz_start_choice(self, run, machine_file):
        # bottom edges wait 5 steps, top edges 10
        argv = ("ghz", "--spec", machine_file, "--p0", "0.2", "--alpha", "0.5", "--trials", "4", "--seed", "0",
                "--json")
        assert run(*argv) == EXIT_OK
        periphery = run.json()
        assert (periphery["start"], periphery["prediction"]) == (1, 20.0)
        assert run(*argv, "--start-choice", "center") == EXIT_OK
        center = run.json()
        assert (center["start"], center["prediction"]) == (0, 15.0)
        assert center["metadata"]["start_choice"] == "weighted center"

    def test_ghz_csv(self, run):
        assert run("ghz", "--topology", "cycle:6", "--p0", "0.5", "--trials", "5", "--seed", "0", "--start", "2",
                   "--csv") == EXIT_OK
        header, row = run.out.getvalue().splitlines()
        assert header == ",".join(ResultsTable.COLUMNS["ghz"])
        assert row.startswith("C6,6,")

    def test_place_random(self, run, machine_file):
        assert run("place", "--machine", machine_file, "--random", "6", "10", "--seed", "2", "--json") == EXIT_OK
        data = run.json()
        assert sorted(data["mapping"]) == [str(q) for q in range(6)]
        assert data["cost"] <= data["naive_cost"]
        assert data["metadata"]["restarts"] == 3

    def test_place_gate_file(self, run, machine_file, tmp_path):
        gates = tmp_path / "gates.txt"
        gates.write_text("# chain\n0 1\n1 2\n")
        assert run("place", "--machine", machine_file, "--gates", gates, "--seed", "0", "--json") == EXIT_OK
        assert run.json()["cost"] == 2

    def test_place_repeated(self, run, machine_file):
        assert run("place", "--machine", machine_file, "--random", "9", "12", "--repeat", "3",
                   "--seed", "5", "--json") == EXIT_OK
        data = run.json()
        assert [row["seed"] for row in data["runs"]] == [5, 6, 7]
        assert data["ratio"]["count"] == 3

    def test_repeat_needs_random_circuits(self, run, machine_file, tmp_path):
        gates = tmp_path / "gates.txt"
        gates.write_text("0 1\n")
        assert run("place", "--machine", machine_file, "--gates", gates, "--repeat", "2", "--seed", "0") == EXIT_USAGE

    def test_results_log(self, run, tmp_path):
        results = tmp_path / "results"
        env = tmp_path / "toolkit.env"
        env.write_text(f"TOPOLOGY_ENABLE_RESULTS_LOG=true\nTOPOLOGY_RESULTS_DIR={results}\n")
        assert run("ghz", "--topology", "complete:3", "--p0", "0.5", "--trials", "4", "--seed", "0",
                   "--config", env) == EXIT_OK
        table = ResultsTable("ghz", str(results / "experiments_ghz.csv"))
        assert len(table) == 1
        assert table.to_frame().loc[0, "graph"] == "K3"


class TestConfigCommand:
    """The active configuration as seen by the CLI."""

    def test_summary_defaults(self, run):
        assert run("config", "--json") == EXIT_OK
        data = run.json()
        assert data["env_file"] is None
        assert data["jobs"] == 1
        assert data["features_enabled"] == {"logging": False, "results_log": False}

    def test_config_file_becomes_global(self, run, tmp_path):
        env = tmp_path / "toolkit.env"
        env.write_text("TOPOLOGY_JOBS=3\n")
        assert run("config", "--config", env, "--json") == EXIT_OK
        assert run.json()["jobs"] == 3
        assert run.cli.config is get_config()

    def test_all_settings_to_file(self, run, tmp_path):
        path = tmp_path / "settings.json"
        assert run("config", "--all", "--out", path) == EXIT_OK
        settings = json.loads(path.read_text())
        assert settings["TOPOLOGY_JOBS"] == 1
        assert list(settings) == sorted(settings)

    def test_missing_config_file(self, run, tmp_path):
        assert run("config", "--config", tmp_path / "absent.env") == EXIT_ERROR
        assert "[CONFIG_ERROR]" in run.err.getvalue()


class TestUsage:
    """Exit codes for argument problems."""

    def test_help(self, run):
        assert run("--help") == EXIT_OK

    def test_unknown_command(self, run):
        assert run("teleport") == EXIT_USAGE

    def test_missing_required_option(self, run):
        assert run("ghz", "--topology", "complete:2", "--seed", "1") == EXIT_USAGE

    def test_jobs_must_be_positive(self, run):
        assert run("invariants", "--topology", "star:4", "--jobs", "0") == EXIT_USAGE

    def test_usage_lists_commands(self, run):
        usage = run.cli.usage()
        for name in ("build", "invariants", "cheeger", "spectrum", "formulas", "ghz", "place", "pareto", "config"):
            assert name in usage

    def test_main(self, capsys):
        assert main(["build", "--topology", "path:3", "--format", "graph"]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["order"] == 3
