"""
File formats for graphs, hierarchy specs, gate lists and placements.

JSON output uses sorted keys and fixed indentation so artifacts are
byte-stable and diff-able. Spec hashes are SHA-256 digests of the canonical
spec JSON and are echoed in every result for reproducibility.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from . import __version__
from .exceptions import FileOperationError, ValidationError
from .graph import Graph, build_graph
from .placement import Gate, Placement
from .products import HierarchySpec
from .topologies import TopologyFactory

# Type aliases
JsonDict = Dict[str, Any]
PathLike = Union[str, Path]

GRAPH_FORMAT = "rooted-graph"
SPEC_FORMAT = "hierarchy-spec"


def dumps(data: Any) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _number(value: float) -> Union[int, float]:
    return int(value) if float(value).is_integer() else float(value)


# ------------------------------------------------------------------- graphs


def graph_to_dict(graph: Graph) -> JsonDict:
    return {
        "format": GRAPH_FORMAT,
        "order": graph.order,
        "root": graph.root,
        "label": graph.label,
        "levels": list(graph.levels),
        "edges": [[i, j, _number(w)] for i, j, w in graph.edges()],
    }


def graph_from_dict(data: JsonDict) -> Graph:
    """
    Rebuild a graph from its JSON form.

    Raises:
        ValidationError: If required fields are missing or malformed
    """
    try:
        order = data["order"]
        edges = [(int(i), int(j), float(w)) for i, j, w in data["edges"]]
    except (KeyError, TypeError, ValueError) as e:
        raise ValidationError(str(data)[:60], f"Malformed graph JSON ({e})", '{"order": N, "edges": [[i, j, w], ...]}')
    return build_graph(order, edges, data.get("root", 0), data.get("levels", ()), data.get("label", ""))


def graph_to_dot(graph: Graph) -> str:
    """Graphviz DOT text; the root is drawn as a double circle."""
    name = (graph.label or "G").replace('"', "'")
    lines = [f'graph "{name}" {{']
    for node in range(graph.order):
        shape = "doublecircle" if node == graph.root else "circle"
        lines.append(f"  {node} [shape={shape}];")
    for i, j, w in graph.edges():
        lines.append(f"  {i} -- {j} [weight={_number(w)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------- specs


def spec_to_dict(spec: HierarchySpec) -> JsonDict:
    data: JsonDict = {
        "format": SPEC_FORMAT,
        "bases": [graph_to_dict(base) for base in spec.bases],
        "alphas": [_number(a) for a in spec.alphas],
        "truncated": spec.truncated,
    }
    if spec.geometric_alpha is not None:
        data["geometric_alpha"] = _number(spec.geometric_alpha)
    return data


def _base_from_json(entry: Union[str, JsonDict]) -> Graph:
    if isinstance(entry, str):
        return TopologyFactory.from_descriptor(entry)
    return graph_from_dict(entry)


def spec_from_dict(data: JsonDict) -> HierarchySpec:
    """
    Rebuild a spec. Bases may be graph JSON objects or descriptors such as ``"complete:3"``.

    ``alphas`` may be omitted when ``geometric_alpha`` is given.

    Raises:
        ValidationError: If bases are missing or the weights cannot be determined
    """
    if "bases" not in data or not data["bases"]:
        raise ValidationError("spec", "A spec needs a non-empty 'bases' list")
    bases = [_base_from_json(entry) for entry in data["bases"]]
    truncated = bool(data.get("truncated", False))
    geometric = data.get("geometric_alpha")
    if "alphas" in data:
        spec = HierarchySpec(tuple(bases), tuple(data["alphas"]), truncated)
        if geometric is not None:
            object.__setattr__(spec, "geometric_alpha", float(geometric))
        return spec
    if geometric is None:
        raise ValidationError("spec", "Either 'alphas' or 'geometric_alpha' is required")
    return HierarchySpec.geometric(bases, geometric, truncated)


def spec_hash(spec: HierarchySpec) -> str:
    """SHA-256 of the canonical spec JSON."""
    return hashlib.sha256(dumps(spec_to_dict(spec)).encode("utf-8")).hexdigest()


# ------------------------------------------------------------------- files


def read_json(path: PathLike, encoding: str = "utf-8") -> JsonDict:
    try:
        return json.loads(Path(path).read_text(encoding=encoding))
    except OSError as e:
        raise FileOperationError(str(path), "read", str(e))
    except json.JSONDecodeError as e:
        raise FileOperationError(str(path), "parse", str(e))


def write_text(path: PathLike, text: str, encoding: str = "utf-8") -> None:
    try:
        target = Path(path)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(text, encoding=encoding)
    except OSError as e:
        raise FileOperationError(str(path), "write", str(e))


def load_graph(path: PathLike, encoding: str = "utf-8") -> Graph:
    return graph_from_dict(read_json(path, encoding))


def load_spec(path: PathLike, encoding: str = "utf-8") -> HierarchySpec:
    return spec_from_dict(read_json(path, encoding))


def parse_gates(text: str, source: str = "<gates>") -> List[Gate]:
    """
    Parse ``u v`` lines; blank lines and ``#`` comments are skipped.

    Raises:
        FileOperationError: On a line that is not two integers
    """
    gates: List[Gate] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        try:
            if len(fields) != 2:
                raise ValueError(f"expected 2 fields, got {len(fields)}")
            gates.append((int(fields[0]), int(fields[1])))
        except ValueError as e:
            raise FileOperationError(source, "parse", f"line {number}: {e}")
    return gates


def read_gates(path: PathLike, encoding: str = "utf-8") -> List[Gate]:
    try:
        text = Path(path).read_text(encoding=encoding)
    except OSError as e:
        raise FileOperationError(str(path), "read", str(e))
    return parse_gates(text, str(path))


def format_gates(gates: List[Gate], header: Optional[str] = None) -> str:
    lines = [f"# {header}"] if header else []
    lines.extend(f"{u} {v}" for u, v in gates)
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------- placements


def placement_to_dict(placement: Placement) -> JsonDict:
    return {
        "machine": spec_to_dict(placement.machine_spec),
        "mapping": {str(qubit): node for qubit, node in enumerate(placement.mapping)},
        "cost": placement.cost,
        "naive_cost": placement.naive_cost,
        "seed": placement.seed,
        "strategy": placement.strategy.value,
    }


def metadata(spec: Optional[HierarchySpec] = None, seed: Optional[int] = None, **extra: Any) -> JsonDict:
    """Provenance block attached to every CLI result."""
    data: JsonDict = {"version": __version__}
    if spec is not None:
        data["spec_hash"] = spec_hash(spec)
    if seed is not None:
        data["seed"] = seed
    data.update(extra)
    return data
