"""Command-line interface for the hierarchical topology toolkit.

Subcommands are registered through a decorator-driven command registry; each
registration carries the argparse configuration for that subcommand. Results
go to standard output or ``--out`` as sorted-key JSON, fixed-column CSV, or
plain ``key: value`` text, always with provenance metadata.
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, TextIO, Tuple

from .cheeger import CheegerMode, cheeger
from .closed_forms import (
    Regime,
    degree_diameter_checks,
    formulas_for_graph,
    kn_total_weight,
    kn_weighted_diameter,
    truncated_node_count,
)
from .config import ToolkitConfig, get_config
from .exceptions import TopologyError
from .ghz import ProbGraph, StartChoice, ghz_trials, probability_weights
from .graph import Graph
from .logger import ExperimentSubject, LoggingObserver, ResultsObserver, configure_logging
from .metrics import invariants
from .pareto import concrete_fleet, dominates, measure, pareto_front, scaling_fleet
from .placement import CircuitGraph, circuit_graph, place, random_circuit
from .products import HierarchySpec, build_hierarchy
from .results import ResultsTable
from .serialization import (
    dumps,
    graph_to_dict,
    graph_to_dot,
    load_graph,
    load_spec,
    metadata,
    placement_to_dict,
    read_gates,
    spec_to_dict,
    write_text,
)
from .spectral import dense_spectrum, recursive_spectrum, spectral_bounds
from .topologies import TopologyFactory

# Type aliases
Payload = Dict[str, Any]
Handler = Callable[["TopologyCLI", argparse.Namespace], Payload]
Configure = Callable[[argparse.ArgumentParser], None]

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2

# ---------------------------------------------------------------------------
# Command registration infrastructure
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CommandInfo:
    """Metadata describing a CLI subcommand."""

    name: str
    handler: Handler
    description: str
    configure: Configure
    category: str = "analysis"
    aliases: Tuple[str, ...] = ()


class CommandRegistry:
    """Decorator-based registry used to store subcommand metadata."""

    def __init__(self) -> None:
        self._commands: Dict[str, CommandInfo] = {}

    def command(
        self,
        name: str,
        *,
        description: str,
        configure: Configure,
        category: str = "analysis",
        aliases: Optional[Iterable[str]] = None,
    ) -> Callable[[Handler], Handler]:
        """Decorator that registers a subcommand."""

        def decorator(func: Handler) -> Handler:
            self._commands[name] = CommandInfo(
                name=name,
                handler=func,
                description=description,
                configure=configure,
                category=category,
                aliases=tuple(aliases or ()),
            )
            return func

        return decorator

    def resolve(self, command_name: str) -> Optional[CommandInfo]:
        if command_name in self._commands:
            return self._commands[command_name]
        for info in self._commands.values():
            if command_name in info.aliases:
                return info
        return None

    def iter_commands(self, *, category: Optional[str] = None) -> Iterable[CommandInfo]:
        for info in self._commands.values():
            if category and info.category != category:
                continue
            yield info


class UsageError(Exception):
    """Raised by handlers for argument combinations argparse cannot express."""


# ---------------------------------------------------------------------------
# Argument groups
# ---------------------------------------------------------------------------


def _common_arguments() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="random seed (required for randomized commands)")
    output = common.add_mutually_exclusive_group()
    output.add_argument("--json", action="store_true", help="emit JSON (sorted keys)")
    output.add_argument("--csv", action="store_true", help="emit CSV rows with fixed columns")
    common.add_argument("--out", default=None, help="write output to this file instead of stdout")
    common.add_argument("--jobs", type=int, default=None, help="worker processes for independent trials")
    common.add_argument("--config", default=None, help="dotenv-style configuration file")
    return common


def _input_arguments(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="hierarchy spec JSON")
    source.add_argument("--graph", help="graph JSON")
    source.add_argument("--topology", help="standard graph descriptor, e.g. grid:2:8")


def _hierarchy_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--base", action="append", default=[],
                        help="base graph descriptor; repeat for mixed bases, top level first")
    parser.add_argument("--depth", type=int, default=None, help="levels when a single base is repeated")
    weights = parser.add_mutually_exclusive_group()
    weights.add_argument("--alpha", type=float, default=1.0, help="geometric level weight")
    weights.add_argument("--alphas", type=float, nargs="+", help="absolute level weights, bottom first")
    parser.add_argument("--truncated", action="store_true", help="build the truncated hierarchy")


def _configure_build(parser: argparse.ArgumentParser) -> None:
    _hierarchy_arguments(parser)
    parser.add_argument("--topology", help="emit a standard graph instead of a hierarchy")
    parser.add_argument("--format", choices=("spec", "graph", "dot"), default="spec")


def _configure_invariants(parser: argparse.ArgumentParser) -> None:
    _input_arguments(parser)


def _configure_cheeger(parser: argparse.ArgumentParser) -> None:
    _input_arguments(parser)
    parser.add_argument("--mode", choices=[mode.value for mode in CheegerMode], default="exact")


def _configure_spectrum(parser: argparse.ArgumentParser) -> None:
    _input_arguments(parser)
    parser.add_argument("--method", choices=("dense", "recursive"), default="dense")
    parser.add_argument("--bounds", action="store_true", help="include diameter, mean-distance and Cheeger bounds")


def _configure_formulas(parser: argparse.ArgumentParser) -> None:
    _hierarchy_arguments(parser)


def _configure_ghz(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--spec", help="hierarchy spec JSON; edges get p0·alpha^(level-1)")
    source.add_argument("--topology", help="standard graph with uniform probability p0")
    parser.add_argument("--p0", type=float, required=True)
    parser.add_argument("--alpha", type=float, default=None, help="per-level probability ratio")
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--start", type=int, default=None, help="start node (default: picked by --start-choice)")
    parser.add_argument("--start-choice", choices=[choice.value for choice in StartChoice], default="periphery",
                        help="default start: largest (periphery) or smallest (center) 1/p-weighted eccentricity")


def _configure_place(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--machine", required=True, help="K_n hierarchy spec JSON")
    circuit = parser.add_mutually_exclusive_group(required=True)
    circuit.add_argument("--gates", help="gate list file, one 'u v' pair per line")
    circuit.add_argument("--random", type=int, nargs=2, metavar=("QUBITS", "GATES"), help="random circuit")
    parser.add_argument("--repeat", type=int, default=1, help="random circuits with seeds seed..seed+R-1")
    parser.add_argument("--restarts", type=int, default=None)


def _configure_config(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--all", action="store_true", help="every setting as sorted JSON instead of the summary")


def _configure_pareto(parser: argparse.ArgumentParser) -> None:
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--topology", action="append", help="descriptor of a graph at the shared order")
    source.add_argument("--standard", action="store_true", help="the standard comparison fleet")
    parser.add_argument("--mode", choices=["scaling", "concrete"], default="scaling",
                        help="standard fleet as growth exponents or as measured values at --order nodes")
    parser.add_argument("--order", type=int, default=256, help="shared order of the concrete standard fleet")
    parser.add_argument("--tolerance", type=float, default=None)


# ---------------------------------------------------------------------------
# Worker functions (module level so process pools can pickle them)
# ---------------------------------------------------------------------------


def _placement_row(machine: HierarchySpec, qubits: int, gates: int, restarts: int, seed: int) -> Payload:
    circuit = circuit_graph(random_circuit(qubits, gates, seed), qubits)
    placement = place(circuit, machine, seed, restarts)
    return {
        "graph": machine.label,
        "N": machine.order,
        "qubits": qubits,
        "gates": gates,
        "seed": seed,
        "cost": placement.cost,
        "naive_cost": placement.naive_cost,
        "ratio": placement.ratio,
        "strategy": placement.strategy.value,
    }


# ---------------------------------------------------------------------------
# Topology CLI implementation
# ---------------------------------------------------------------------------


class TopologyCLI:
    """Argument-driven command runner for the toolkit."""

    registry = CommandRegistry()

    def __init__(
        self,
        *,
        config: Optional[ToolkitConfig] = None,
        output_stream: Optional[TextIO] = None,
        error_stream: Optional[TextIO] = None,
    ) -> None:
        self.config = config
        self._output_stream = output_stream or sys.stdout
        self._error_stream = error_stream or sys.stderr
        self.events = ExperimentSubject()
        self._parser = self._build_parser()

    # -------------------------- Parser -----------------------------------

    def _build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="hierarchy-toolkit",
            description="Build hierarchical-product topologies and measure them.",
        )
        subparsers = parser.add_subparsers(dest="command", metavar="command")
        subparsers.required = True
        common = _common_arguments()
        for info in self.registry.iter_commands():
            sub = subparsers.add_parser(
                info.name, parents=[common], help=info.description,
                description=info.description, aliases=list(info.aliases),
            )
            info.configure(sub)
        return parser

    def usage(self) -> str:
        return self._parser.format_help()

    # -------------------------- Dispatch ---------------------------------

    def run_command(self, argv: Sequence[str]) -> int:
        """
        Parse ``argv``, run the subcommand and write its output.

        Returns:
            int: 0 on success, 1 on a computation error, 2 on a usage error
        """
        try:
            args = self._parser.parse_args(list(argv))
        except SystemExit as exc:
            return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

        info = self.registry.resolve(args.command)
        try:
            self._apply_config(args)
            payload = info.handler(self, args)
            self._emit(args, payload)
        except UsageError as exc:
            print(f"usage error: {exc}", file=self._error_stream)
            print(self._parser.format_usage(), file=self._error_stream, end="")
            return EXIT_USAGE
        except TopologyError as exc:
            self.events.notify("error", {"error_type": type(exc).__name__, "error_message": str(exc)})
            print(f"Error: {exc}", file=self._error_stream)
            return EXIT_ERROR
        return EXIT_OK

    def _apply_config(self, args: argparse.Namespace) -> None:
        if args.config is not None:
            self.config = get_config(args.config, reload=True)
        elif self.config is None:
            self.config = get_config()
        self.events = ExperimentSubject()
        if self.config.is_logging_enabled():
            configure_logging(self.config.get_log_level(), self.config.get_log_file_path(),
                              self.config.get_log_format())
            self.events.attach(LoggingObserver())
        if self.config.is_results_log_enabled():
            self.events.attach(ResultsObserver(self.config.get_results_file_path()))
        if args.jobs is None:
            args.jobs = self.config.get_jobs()
        elif args.jobs < 1:
            raise UsageError("--jobs must be at least 1")

    def _emit(self, args: argparse.Namespace, payload: Payload) -> None:
        if "text" in payload:
            text = payload["text"]
        elif args.csv:
            if "csv" not in payload:
                raise UsageError(f"'{args.command}' has no CSV output")
            text = payload["csv"]
        elif args.json:
            text = dumps(payload["json"])
        else:
            text = "".join(f"{key}: {value}\n" for key, value in sorted(payload["json"].items()))
        if args.out:
            write_text(args.out, text, self.config.get_default_encoding())
        else:
            self._output_stream.write(text)

    # -------------------------- Input helpers ----------------------------

    def _require_seed(self, args: argparse.Namespace) -> int:
        if args.seed is None:
            raise UsageError(f"'{args.command}' is randomized and requires --seed")
        return args.seed

    def _load_input(self, args: argparse.Namespace) -> Tuple[Graph, Optional[HierarchySpec]]:
        encoding = self.config.get_default_encoding()
        if getattr(args, "spec", None):
            spec = load_spec(args.spec, encoding)
            return build_hierarchy(spec), spec
        if getattr(args, "graph", None):
            return load_graph(args.graph, encoding), None
        return TopologyFactory.from_descriptor(args.topology), None

    @staticmethod
    def _spec_from_args(args: argparse.Namespace) -> HierarchySpec:
        if not args.base:
            raise UsageError("at least one --base is required")
        bases = [TopologyFactory.from_descriptor(descriptor) for descriptor in reversed(args.base)]
        if args.depth is not None:
            if len(bases) != 1:
                raise UsageError("--depth repeats a single --base")
            bases = bases * args.depth
        if args.alphas:
            return HierarchySpec(tuple(bases), tuple(args.alphas), args.truncated)
        return HierarchySpec.geometric(bases, args.alpha, args.truncated)

    # -------------------------- Command handlers -------------------------

    @registry.command("build", description="Build a hierarchy spec, graph JSON or DOT", configure=_configure_build,
                      category="construction")
    def command_build(self, args: argparse.Namespace) -> Payload:
        if args.topology:
            graph, spec = TopologyFactory.from_descriptor(args.topology), None
        else:
            spec = self._spec_from_args(args)
            graph = build_hierarchy(spec)
        if args.format == "dot":
            return {"text": graph_to_dot(graph)}
        if args.format == "spec" and spec is not None:
            return {"text": dumps(spec_to_dict(spec))}
        return {"text": dumps(graph_to_dict(graph))}

    @registry.command("invariants", description="Measure structural invariants", configure=_configure_invariants)
    def command_invariants(self, args: argparse.Namespace) -> Payload:
        graph, spec = self._load_input(args)
        data = invariants(graph).to_dict()
        data["label"] = graph.label
        data["metadata"] = metadata(spec)
        return {"json": data}

    @registry.command("cheeger", description="Cheeger constant (exact or heuristic)", configure=_configure_cheeger)
    def command_cheeger(self, args: argparse.Namespace) -> Payload:
        graph, spec = self._load_input(args)
        result = cheeger(graph, args.mode, self.config.get_cheeger_exact_max_order())
        data = result.to_dict()
        data["metadata"] = metadata(spec)
        return {"json": data}

    @registry.command("spectrum", description="Laplacian spectrum, dense or recursive", configure=_configure_spectrum)
    def command_spectrum(self, args: argparse.Namespace) -> Payload:
        graph, spec = self._load_input(args)
        if args.method == "recursive":
            if spec is None:
                raise UsageError("--method recursive needs --spec")
            spectrum = recursive_spectrum(spec, self.config.get_char_poly_max_order(),
                                          self.config.get_root_imag_tolerance())
        else:
            spectrum = dense_spectrum(graph)
        data = spectrum.to_dict()
        if args.bounds:
            data["bounds"] = spectral_bounds(graph, spectrum).to_dict()
        data["metadata"] = metadata(spec)
        return {"json": data}

    @registry.command("formulas", description="Closed-form hierarchy invariants", configure=_configure_formulas)
    def command_formulas(self, args: argparse.Namespace) -> Payload:
        spec = self._spec_from_args(args)
        if len({base for base in spec.bases}) > 1:
            raise UsageError("formulas need a single repeated base")
        base = spec.bases[0]
        record = formulas_for_graph(base, spec.depth, spec.alphas)
        data: Payload = {"formulas": record.to_dict(), "order": spec.order}
        n = base.order
        if base.number_of_edges == n * (n - 1) // 2 and spec.geometric_alpha is not None:
            alpha = spec.geometric_alpha
            data["complete_base"] = {
                "weighted_diameter": float(kn_weighted_diameter(n, spec.depth, alpha)),
                "total_edge_weight": float(kn_total_weight(n, spec.depth, alpha)),
                "regime": Regime.classify(n, alpha).value,
                "truncated_order": truncated_node_count(n, spec.depth),
            }
        if record.max_degree >= 3:
            data["moore_bound"] = float(degree_diameter_checks(record.max_degree, int(record.diameter)).moore_bound)
        data["metadata"] = metadata(spec)
        return {"json": data}

    @registry.command("ghz", description="Probabilistic GHZ spreading trials", configure=_configure_ghz,
                      category="experiment")
    def command_ghz(self, args: argparse.Namespace) -> Payload:
        seed = self._require_seed(args)
        spec = None
        if args.spec:
            spec = load_spec(args.spec, self.config.get_default_encoding())
            prob = probability_weights(spec, args.p0, args.alpha)
            label = spec.label
        else:
            graph = TopologyFactory.from_descriptor(args.topology)
            prob = ProbGraph.uniform(graph, args.p0)
            label = graph.label
        stats = ghz_trials(prob, args.start, args.trials, seed, args.jobs, self.config.get_ghz_step_cap(),
                           args.start_choice)
        row = {
            "graph": label, "N": prob.order, "alpha": prob.alpha, "p0": prob.p0, "start": stats.start,
            "trials": stats.trials, "mean": stats.mean, "std": stats.std, "prediction": stats.prediction,
            "bound_lo": stats.bound_lo, "bound_hi": stats.bound_hi, "seed": seed,
        }
        self.events.notify("ghz", row)
        table = ResultsTable("ghz")
        table.add_row(row)
        data = stats.to_dict()
        data["graph"] = label
        choice = "given" if args.start is not None else f"weighted {args.start_choice}"
        data["metadata"] = metadata(spec, seed, generator=stats.generator, start_choice=choice)
        return {"json": data, "csv": table.to_csv()}

    @registry.command("place", description="Partition-and-rotate circuit placement", configure=_configure_place,
                      category="experiment")
    def command_place(self, args: argparse.Namespace) -> Payload:
        seed = self._require_seed(args)
        machine = load_spec(args.machine, self.config.get_default_encoding())
        restarts = args.restarts if args.restarts is not None else self.config.get_placement_restarts()
        if args.repeat < 1:
            raise UsageError("--repeat must be at least 1")
        if args.repeat > 1:
            if not args.random:
                raise UsageError("--repeat needs --random")
            return self._place_repeated(args, machine, restarts, seed)

        if args.gates:
            circuit: CircuitGraph = circuit_graph(read_gates(args.gates, self.config.get_default_encoding()))
        else:
            qubits, gates = args.random
            circuit = circuit_graph(random_circuit(qubits, gates, seed), qubits)
        placement = place(circuit, machine, seed, restarts)
        row = {
            "graph": machine.label, "N": machine.order, "qubits": circuit.qubits, "gates": circuit.gate_count,
            "seed": seed, "cost": placement.cost, "naive_cost": placement.naive_cost, "ratio": placement.ratio,
            "strategy": placement.strategy.value,
        }
        self.events.notify("placement", row)
        table = ResultsTable("placement")
        table.add_row(row)
        data = placement_to_dict(placement)
        data["metadata"] = metadata(machine, seed, restarts=restarts)
        return {"json": data, "csv": table.to_csv()}

    def _place_repeated(self, args: argparse.Namespace, machine: HierarchySpec, restarts: int, seed: int) -> Payload:
        qubits, gates = args.random
        run = partial(_placement_row, machine, qubits, gates, restarts)
        seeds = [seed + offset for offset in range(args.repeat)]
        if args.jobs > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as executor:
                rows = list(executor.map(run, seeds))
        else:
            rows = [run(s) for s in seeds]
        table = ResultsTable("placement")
        for row in rows:
            self.events.notify("placement", row)
            table.add_row(row)
        data = {
            "runs": rows,
            "ratio": table.summary("ratio"),
            "metadata": metadata(machine, seed, restarts=restarts, repeat=args.repeat),
        }
        return {"json": data, "csv": table.to_csv()}

    @registry.command("pareto", description="Pareto-efficient topologies", configure=_configure_pareto)
    def command_pareto(self, args: argparse.Namespace) -> Payload:
        if args.standard and args.mode == "scaling":
            records = scaling_fleet()
            tolerance = 0.1 if args.tolerance is None else args.tolerance
        elif args.standard:
            records = concrete_fleet(args.order)
            tolerance = 0.0 if args.tolerance is None else args.tolerance
        else:
            records = [measure(TopologyFactory.from_descriptor(d), d) for d in args.topology]
            tolerance = 0.0 if args.tolerance is None else args.tolerance
        front = pareto_front(records, tolerance)
        rows = []
        for record in records:
            entry = record.to_dict()
            entry["efficient"] = record in front
            entry["dominated_by"] = [other.label for other in records
                                     if other is not record and dominates(other, record, tolerance)]
            rows.append(entry)
        mode = args.mode if args.standard else "concrete"
        return {"json": {"records": rows, "front": [record.label for record in front], "mode": mode,
                         "tolerance": tolerance, "metadata": metadata()}}

    @registry.command("config", description="Show the active configuration", configure=_configure_config,
                      category="settings")
    def command_config(self, args: argparse.Namespace) -> Payload:
        if args.all:
            return {"text": self.config.export_config() + "\n"}
        return {"json": self.config.get_summary()}


def main(argv: Optional[List[str]] = None) -> int:
    return TopologyCLI().run_command(sys.argv[1:] if argv is None else argv)
