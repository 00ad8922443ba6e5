"""
Standard topologies built through a factory registry.

Each topology family is a small class that validates its parameters and
delegates construction to a networkx generator (or to the hierarchical
product for the porcupine graph). Families are addressed by name so the CLI
can accept compact descriptors such as ``complete:4`` or ``grid:2:3``.
"""

from abc import ABC, abstractmethod
from typing import Dict, List, Sequence, Tuple, Type

import networkx as nx

from .exceptions import ValidationError
from .graph import Graph
from .input_validators import InputValidator
from .products import hproduct


class Topology(ABC):
    """Abstract base class for a parameterized graph family."""

    #: Parameter names with their minimum values
    parameters: Tuple[Tuple[str, int], ...] = ()

    def __init__(self, name: str):
        self.name = name

    def build(self, *params) -> Graph:
        """
        Validate parameters and build a unit-weight graph.

        Raises:
            ValidationError: On a wrong parameter count or a value below its minimum
        """
        if len(params) != len(self.parameters):
            names = ", ".join(name for name, _ in self.parameters)
            raise ValidationError(params, f"'{self.name}' takes {len(self.parameters)} parameters", names)
        values = [
            InputValidator.validate_integer(value, minimum, name)
            for value, (name, minimum) in zip(params, self.parameters)
        ]
        return self._build(*values)

    @abstractmethod
    def _build(self, *values: int) -> Graph:
        pass

    def __str__(self) -> str:
        return self.name


class CompleteTopology(Topology):
    """K_n: every pair adjacent."""

    parameters = (("n", 2),)

    def __init__(self):
        super().__init__("complete")

    def _build(self, n: int) -> Graph:
        return Graph.from_networkx(nx.complete_graph(n), 0, f"K{n}")


class CycleTopology(Topology):
    """C_n: a ring."""

    parameters = (("n", 3),)

    def __init__(self):
        super().__init__("cycle")

    def _build(self, n: int) -> Graph:
        return Graph.from_networkx(nx.cycle_graph(n), 0, f"C{n}")


class StarTopology(Topology):
    """S_n: hub 0 joined to n-1 leaves; the hub is the root."""

    parameters = (("n", 2),)

    def __init__(self):
        super().__init__("star")

    def _build(self, n: int) -> Graph:
        return Graph.from_networkx(nx.star_graph(n - 1), 0, f"S{n}")


class PathTopology(Topology):
    """P_n: a chain rooted at one end."""

    parameters = (("n", 2),)

    def __init__(self):
        super().__init__("path")

    def _build(self, n: int) -> Graph:
        return Graph.from_networkx(nx.path_graph(n), 0, f"P{n}")


class GridTopology(Topology):
    """d-dimensional nearest-neighbour grid with ``side`` nodes per axis, rooted at a corner."""

    parameters = (("d", 1), ("side", 2))

    def __init__(self):
        super().__init__("grid")

    def _build(self, d: int, side: int) -> Graph:
        grid = nx.grid_graph(dim=[side] * d)
        corner = next(iter(sorted(grid.nodes())))
        return Graph.from_networkx(grid, corner, f"grid{d}d{side}")


class PorcupineTopology(Topology):
    """K_m ⊓ S_m: a star hanging off every node of a complete graph."""

    parameters = (("m", 2),)

    def __init__(self):
        super().__init__("porcupine")

    def _build(self, m: int) -> Graph:
        return hproduct(TopologyFactory.create("complete", m), TopologyFactory.create("star", m)) \
            .with_label(f"porcupine{m}")


class TopologyFactory:
    """
    Factory for standard graph families.

    Families are registered by name; :meth:`create` builds a graph from the
    family name and its integer parameters.
    """

    _topologies: Dict[str, Type[Topology]] = {
        "complete": CompleteTopology,
        "cycle": CycleTopology,
        "star": StarTopology,
        "path": PathTopology,
        "grid": GridTopology,
        "porcupine": PorcupineTopology,
    }

    @classmethod
    def get_topology(cls, name: str) -> Topology:
        """
        Instantiate the family registered under ``name``.

        Raises:
            ValidationError: If the name is not registered
        """
        key = name.lower().strip()
        if key not in cls._topologies:
            available = ", ".join(cls._topologies)
            raise ValidationError(name, "Unsupported topology", f"Available topologies: {available}")
        return cls._topologies[key]()

    @classmethod
    def create(cls, name: str, *params) -> Graph:
        return cls.get_topology(name).build(*params)

    @classmethod
    def from_descriptor(cls, descriptor: str) -> Graph:
        """Build from ``name:param[:param...]``, e.g. ``grid:2:16``."""
        name, *params = descriptor.strip().split(":")
        return cls.create(name, *params)

    @classmethod
    def get_available_topologies(cls) -> List[str]:
        return list(cls._topologies.keys())

    @classmethod
    def register_topology(cls, name: str, topology_class: Type[Topology]) -> None:
        """
        Register a new topology family.

        Raises:
            ValidationError: If the class does not derive from Topology
        """
        if not (isinstance(topology_class, type) and issubclass(topology_class, Topology)):
            raise ValidationError(
                topology_class,
                "Invalid topology class",
                "Must inherit from Topology base class",
            )
        cls._topologies[name.lower().strip()] = topology_class


def standard_graph(kind: str, *params) -> Graph:
    """Build a unit-weight standard graph, e.g. ``standard_graph("cycle", 7)``."""
    return TopologyFactory.create(kind, *params)


def standard_fleet(names: Sequence[str]) -> List[Graph]:
    """Build several graphs from descriptors."""
    return [TopologyFactory.from_descriptor(name) for name in names]
