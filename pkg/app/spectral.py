"""
Laplacian spectra of graphs and hierarchies.

``dense_spectrum`` is the reference symmetric eigensolver. ``recursive_spectrum``
obtains the spectrum of a non-truncated hierarchy from its small base graphs
alone: every eigenvalue μ of the level above spawns the roots of
φ_L(x) - β μ φ_L'(x) at the level below, where L' is the base Laplacian with
the root row and column removed. Roots come from batched companion matrices
and are polished with damped Newton steps.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from .exceptions import SpectralError
from .graph import Graph
from .metrics import require_connected
from .products import HierarchySpec, product_matrix

logger = logging.getLogger(__name__)

ZERO_TOLERANCE = 1e-9
IMAG_TOLERANCE = 1e-9
CHAR_POLY_MAX_ORDER = 64
DENSE_MAX_ORDER = 4096
NEWTON_STEPS = 4
RESIDUAL_TOLERANCE = 1e-8


@dataclass(frozen=True)
class Spectrum:
    """Sorted Laplacian eigenvalues."""

    values: Tuple[float, ...]
    method: str = "dense"

    @property
    def lambda2(self) -> float:
        """Algebraic connectivity (0.0 for a single node)."""
        return self.values[1] if len(self.values) > 1 else 0.0

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def to_dict(self) -> Dict[str, object]:
        return {"method": self.method, "eigenvalues": list(self.values), "lambda2": self.lambda2}


@dataclass(frozen=True)
class CharPolyPair:
    """Monic coefficients (highest degree first) of φ_L and φ_L'."""

    phi: Tuple[float, ...]
    phi_rootdeleted: Tuple[float, ...]

    def evaluate(self, x: float) -> Tuple[float, float]:
        return float(np.polyval(self.phi, x)), float(np.polyval(self.phi_rootdeleted, x))


@dataclass(frozen=True)
class SpectralBounds:
    """Bounds on diameter, mean distance and Cheeger constant implied by λ2."""

    lambda2: float
    max_valency: float
    diameter_lo: float
    diameter_hi: float
    mean_distance_lo: float
    mean_distance_hi: float
    cheeger_lo: float
    cheeger_hi: float

    def to_dict(self) -> Dict[str, float]:
        return dict(self.__dict__)


def _sorted_spectrum(values: np.ndarray, method: str) -> Spectrum:
    return Spectrum(tuple(float(v) for v in np.sort(values)), method)


def dense_spectrum(graph: Graph, max_order: int = DENSE_MAX_ORDER) -> Spectrum:
    """
    Eigenvalues of the Laplacian via a symmetric dense eigensolver.

    Raises:
        SpectralError: If the graph is too large or a spot-checked residual is off
    """
    if graph.order > max_order:
        raise SpectralError(f"dense solve limited to {max_order} nodes, got {graph.order}; use the recursive method")
    laplacian = graph.laplacian()
    values, vectors = np.linalg.eigh(laplacian)
    scale = max(1.0, float(np.abs(laplacian).max()))
    for index in {0, min(1, graph.order - 1), graph.order - 1}:
        residual = np.linalg.norm(laplacian @ vectors[:, index] - values[index] * vectors[:, index])
        if residual > RESIDUAL_TOLERANCE * scale:
            raise SpectralError(f"eigenpair {index} residual {residual:.3e} exceeds tolerance")
    return _sorted_spectrum(values, "dense")


def char_polys(laplacian: np.ndarray, root: int = 0, max_order: int = CHAR_POLY_MAX_ORDER) -> CharPolyPair:
    """
    Characteristic polynomials of L and of L with the root row/column removed.

    Coefficients are expanded from the eigenvalues of the two symmetric matrices.

    Raises:
        SpectralError: If L is larger than ``max_order``
    """
    order = laplacian.shape[0]
    if order > max_order:
        raise SpectralError(f"characteristic polynomials limited to order {max_order}, got {order}")
    reduced = np.delete(np.delete(laplacian, root, axis=0), root, axis=1)
    phi = np.poly(np.linalg.eigvalsh(laplacian)) if order else np.ones(1)
    phi_rootdeleted = np.poly(np.linalg.eigvalsh(reduced)) if order > 1 else np.ones(1)
    return CharPolyPair(tuple(float(c) for c in phi), tuple(float(c) for c in phi_rootdeleted))


class LevelSolver:
    """
    Root finder for one base level of the recursion.

    Eigenvalues of L whose eigenvectors can be chosen to vanish at the root
    are roots of both φ_L and φ_L' for every μ; they are split off up front.
    The remaining visible eigenvalues λ_j with root weights z_j give
    φ̃(x) = Π (x - λ_j) and φ̃'(x) = Σ z_j Π_{l≠j} (x - λ_l), whose combination
    φ̃ - c φ̃' has only simple real roots for c >= 0.
    """

    def __init__(self, base: Graph, level: int, imag_tolerance: float = IMAG_TOLERANCE):
        self.level = level
        self.imag_tolerance = imag_tolerance
        laplacian = base.laplacian()
        values, vectors = np.linalg.eigh(laplacian)
        root_weights = vectors[base.root] ** 2
        cluster_tolerance = 1e-8 * max(1.0, float(values[-1]))

        fixed = []
        visible_values = []
        visible_weights = []
        start = 0
        while start < len(values):
            stop = start + 1
            while stop < len(values) and values[stop] - values[start] <= cluster_tolerance:
                stop += 1
            cluster_value = float(values[start:stop].mean())
            weight = float(root_weights[start:stop].sum())
            if weight > 1e-14:
                visible_values.append(cluster_value)
                visible_weights.append(weight)
                fixed.extend([cluster_value] * (stop - start - 1))
            else:
                fixed.extend([cluster_value] * (stop - start))
            start = stop

        self.fixed_roots = np.asarray(fixed)
        self.visible_values = np.asarray(visible_values)
        weights = np.asarray(visible_weights)
        weights /= weights.sum()
        self.phi = np.poly(self.visible_values)
        numerator = np.zeros(len(self.visible_values))
        for j, z in enumerate(weights):
            numerator = numerator + z * np.poly(np.delete(self.visible_values, j))
        self.phi_rootdeleted = numerator

    @property
    def degree(self) -> int:
        return len(self.visible_values)

    def _coefficients(self, couplings: np.ndarray) -> np.ndarray:
        padded = np.concatenate([[0.0], self.phi_rootdeleted])
        return self.phi[None, :] - couplings[:, None] * padded[None, :]

    @staticmethod
    def _evaluate(coefficients: np.ndarray, points: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Horner evaluation of p and p' for each row's polynomial at that row's points."""
        value = np.zeros_like(points)
        derivative = np.zeros_like(points)
        for column in range(coefficients.shape[1]):
            derivative = derivative * points + value
            value = value * points + coefficients[:, column:column + 1]
        return value, derivative

    def roots(self, mus: np.ndarray, beta: float) -> np.ndarray:
        """
        All roots for every μ, shape (len(mus), n).

        Raises:
            SpectralError: If a root keeps an imaginary part above tolerance
        """
        couplings = beta * mus
        count = len(mus)
        if self.degree == 0:
            found = np.zeros((count, 0))
        elif self.degree == 1:
            coefficients = self._coefficients(couplings)
            found = -coefficients[:, 1:2]
        else:
            coefficients = self._coefficients(couplings)
            degree = self.degree
            companion = np.zeros((count, degree, degree))
            companion[:, 0, :] = -coefficients[:, 1:]
            companion[:, np.arange(1, degree), np.arange(degree - 1)] = 1.0
            points = np.linalg.eigvals(companion).astype(complex)
            complex_coefficients = coefficients.astype(complex)
            for _ in range(NEWTON_STEPS):
                value, derivative = self._evaluate(complex_coefficients, points)
                safe = np.abs(derivative) > 1e-300
                step = np.where(safe, value / np.where(safe, derivative, 1.0), 0.0)
                candidate = points - step
                new_value, _ = self._evaluate(complex_coefficients, candidate)
                worse = np.abs(new_value) > np.abs(value)
                if worse.any():
                    half = points - 0.5 * step
                    candidate = np.where(worse, half, candidate)
                points = candidate
            scale = np.maximum(1.0, np.abs(points.real))
            bad = np.abs(points.imag) > self.imag_tolerance * scale
            if bad.any():
                row = int(np.argwhere(bad)[0][0])
                raise SpectralError(
                    f"root with imaginary part {points.imag[bad][0]:.3e}",
                    level=self.level,
                    mu=float(mus[row]),
                )
            found = points.real

        fixed = np.broadcast_to(self.fixed_roots, (count, len(self.fixed_roots)))
        return np.concatenate([found, fixed], axis=1)


def recursive_spectrum(
    spec: HierarchySpec,
    max_base_order: int = CHAR_POLY_MAX_ORDER,
    imag_tolerance: float = IMAG_TOLERANCE,
) -> Spectrum:
    """
    Spectrum of a non-truncated hierarchy from its base graphs.

    Level weights enter only through the ratios β_i = α_i / α_{i-1}. The
    top base is solved densely; each lower level maps every current
    eigenvalue μ to the roots of φ_{L_i} - β_{i+1} μ φ_{L_i'}.

    Raises:
        SpectralError: For truncated specs, oversized bases, or non-real roots
    """
    if spec.truncated:
        raise SpectralError("the recursion applies to non-truncated hierarchies only")
    for level, base in enumerate(spec.bases, start=1):
        if base.order > max_base_order:
            raise SpectralError(f"base order {base.order} exceeds {max_base_order}", level=level)

    current = np.asarray(dense_spectrum(spec.bases[-1]).values)
    betas = spec.relative_weights
    for index in range(spec.depth - 2, -1, -1):
        solver = LevelSolver(spec.bases[index], index + 1, imag_tolerance)
        current = solver.roots(current, betas[index]).ravel()
        logger.debug("level %d: %d eigenvalues", index + 1, current.size)
    return _sorted_spectrum(current, "recursive")


def recursive_laplacian(spec: HierarchySpec) -> np.ndarray:
    """
    Laplacian assembled level by level: M_k = L_k, M_i = β_{i+1} M_{i+1} ⊗ D + I ⊗ L_i.

    M_1 equals the Laplacian of the built hierarchy.
    """
    if spec.truncated:
        raise SpectralError("the recursion applies to non-truncated hierarchies only")
    assembled = spec.bases[-1].laplacian()
    betas = spec.relative_weights
    for index in range(spec.depth - 2, -1, -1):
        base = spec.bases[index]
        assembled = product_matrix(assembled, base.laplacian(), base.root, betas[index])
    return assembled


def spectral_bounds(graph: Graph, spectrum: Optional[Spectrum] = None) -> SpectralBounds:
    """
    Bounds implied by the algebraic connectivity.

    Diameter: 4/(Nλ2) <= δ <= 2⌈(Δ+λ2)/(4λ2)·ln(N-1)⌉. Mean distance over
    distinct pairs: (2/λ2 + (N-2)/2)/(N-1) <= ρ̄ <= N/(N-1)·⌈(Δ+λ2)/(4λ2)·ln(N-1)⌉.
    Cheeger: λ2/2 <= h <= sqrt(λ2(2Δ - λ2)). Δ is the maximum valency.

    Raises:
        SpectralError: If λ2 vanishes or the graph has fewer than 3 nodes
    """
    require_connected(graph, "spectral bounds")
    order = graph.order
    if order < 3:
        raise SpectralError("spectral bounds need at least 3 nodes")
    spectrum = spectrum or dense_spectrum(graph)
    lambda2 = spectrum.lambda2
    if lambda2 <= ZERO_TOLERANCE:
        raise SpectralError(f"lambda2 = {lambda2:.3e} indicates a disconnected graph")
    delta = float(graph.valencies.max())
    log_term = math.ceil((delta + lambda2) / (4.0 * lambda2) * math.log(order - 1))
    return SpectralBounds(
        lambda2=lambda2,
        max_valency=delta,
        diameter_lo=4.0 / (order * lambda2),
        diameter_hi=2.0 * log_term,
        mean_distance_lo=(2.0 / lambda2 + (order - 2) / 2.0) / (order - 1),
        mean_distance_hi=order / (order - 1) * log_term,
        cheeger_lo=lambda2 / 2.0,
        cheeger_hi=math.sqrt(max(lambda2 * (2.0 * delta - lambda2), 0.0)),
    )
