"""Synchronous consensus iteration, two ways.

``iterate`` runs the plain matrix recurrence x(t+1) = W x(t).
``distributed_iterate`` runs the same rounds as per-node neighbor
gathers with no global matrix, which is how the protocol executes on an
actual network.  Both produce a Trajectory; they must agree to
reassociation-level tolerance, and the entry sum is conserved because
the weight matrix is symmetric stochastic.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import IO

import numpy as np

from .topology import TfsGraph, edge_orbit, node_index
from .weighting import OrbitWeights, WeightMatrix, check_orbit_weights


class InsufficientSignalError(RuntimeError):
    """Error norms fell to rounding level before the estimation window."""


@dataclass(frozen=True)
class Trajectory:
    """States x(0..T), per-step distances to consensus, and the target.

    ``x_bar`` is the exact average vector of the initial state; the
    error norm at step t is the euclidean distance of x(t) from it.
    ``seed`` records how a random initial state was drawn, if it was.
    """

    states: np.ndarray
    error_norms: np.ndarray
    x_bar: np.ndarray
    seed: int | None = None

    def __post_init__(self) -> None:
        for name in ("states", "error_norms", "x_bar"):
            arr = np.asarray(getattr(self, name), dtype=float).copy()
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n_steps(self) -> int:
        return self.states.shape[0] - 1

    @property
    def average(self) -> float:
        return float(self.x_bar[0])

    def sum_deviations(self) -> np.ndarray:
        """|1'x(t) - 1'x(0)| per step."""
        sums = self.states.sum(axis=1)
        return np.abs(sums - sums[0])


def _as_trajectory(states: list[np.ndarray], seed: int | None) -> Trajectory:
    stacked = np.vstack(states)
    x_bar = np.full(stacked.shape[1], stacked[0].mean())
    errors = np.linalg.norm(stacked - x_bar, axis=1)
    return Trajectory(states=stacked, error_norms=errors, x_bar=x_bar, seed=seed)


def iterate(
    matrix: WeightMatrix | np.ndarray,
    x0: np.ndarray,
    steps: int,
    seed: int | None = None,
) -> Trajectory:
    """Run the matrix recurrence for ``steps`` rounds."""
    entries = matrix.entries if isinstance(matrix, WeightMatrix) else np.asarray(matrix)
    x = np.asarray(x0, dtype=float)
    if x.ndim != 1 or entries.shape != (x.size, x.size):
        raise ValueError(
            f"state of length {x.size} does not match matrix shape {entries.shape}"
        )
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")
    states = [x]
    for _ in range(steps):
        x = entries @ x
        states.append(x)
    return _as_trajectory(states, seed)


def distributed_iterate(
    graph: TfsGraph,
    weights: OrbitWeights,
    x0: np.ndarray,
    steps: int,
    seed: int | None = None,
) -> Trajectory:
    """Run the same rounds as local updates: each node combines its own
    value with its neighbors' values, weighted per edge orbit.

    No weight matrix is formed; the update is accumulated edge by edge.
    """
    params = graph.params
    check_orbit_weights(params, weights)
    x = np.asarray(x0, dtype=float)
    if x.ndim != 1 or x.size != params.n_nodes:
        raise ValueError(
            f"state of length {x.size} does not match {params.n_nodes} nodes"
        )
    if steps < 0:
        raise ValueError(f"steps must be >= 0, got {steps}")

    ends_a = np.empty(len(graph.edges), dtype=np.intp)
    ends_b = np.empty(len(graph.edges), dtype=np.intp)
    edge_w = np.empty(len(graph.edges))
    for k, (u, v) in enumerate(graph.edges):
        ends_a[k] = node_index(params, u)
        ends_b[k] = node_index(params, v)
        edge_w[k] = weights[edge_orbit(params, (u, v))]
    incident = np.zeros(params.n_nodes)
    np.add.at(incident, ends_a, edge_w)
    np.add.at(incident, ends_b, edge_w)

    states = [x]
    for _ in range(steps):
        nxt = (1.0 - incident) * x
        np.add.at(nxt, ends_a, edge_w * x[ends_b])
        np.add.at(nxt, ends_b, edge_w * x[ends_a])
        x = nxt
        states.append(x)
    return _as_trajectory(states, seed)


def random_initial_state(n: int, seed: int) -> np.ndarray:
    """Seeded uniform node readings on [0, 100)."""
    return np.random.default_rng(seed).uniform(0.0, 100.0, size=n)


def convergence_factor_estimate(trajectory: Trajectory, tail: int = 50) -> float:
    """Geometric-mean per-step contraction over the last ``tail`` steps.

    A window average suppresses transients from non-dominant modes; for
    a generic initial state the estimate converges to the SLEM.
    """
    if tail < 2:
        raise ValueError(f"tail must be >= 2, got {tail}")
    errors = trajectory.error_norms
    if errors.size < tail + 1:
        raise ValueError(
            f"trajectory has {errors.size - 1} steps, need at least {tail}"
        )
    window = errors[-(tail + 1):]
    if window.min() <= 1e-13:
        raise InsufficientSignalError(
            "error norms at rounding level inside the estimation window"
        )
    return float((window[-1] / window[0]) ** (1.0 / tail))


def write_trajectory_csv(trajectory: Trajectory, stream: IO[str]) -> None:
    """Columns t, error_norm, sum_deviation; 10 significant digits."""
    writer = csv.writer(stream)
    writer.writerow(["t", "error_norm", "sum_deviation"])
    deviations = trajectory.sum_deviations()
    for t in range(trajectory.states.shape[0]):
        writer.writerow(
            [t, f"{trajectory.error_norms[t]:.10g}", f"{deviations[t]:.10g}"]
        )
