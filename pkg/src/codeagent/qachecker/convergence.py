"""Desk-scale testbed for the gate's damped-Newton refinement model.

The refinement loop is modeled as maximizing a concave quadratic quality
surface: each step moves the current point by
``-learning_rate * H^-1 grad`` where ``H`` is the (constant) Hessian.
On such a surface the step contracts the distance to the optimum by a
factor of exactly ``1 - learning_rate`` per iteration, so the quality
trajectory is non-decreasing and the iterate converges for any
learning rate in (0, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_DIM = 16

_SYMMETRY_TOL = 1e-9


@dataclass(frozen=True)
class QuadraticObjective:
    """Concave quadratic quality surface with a unique maximum.

    ``value(x) = (x - optimum)^T curvature (x - optimum)`` with a
    symmetric negative-definite curvature matrix, so the maximum value
    is 0 at ``optimum``.  Arrays are treated as read-only after
    construction.
    """

    optimum: np.ndarray
    curvature: np.ndarray
    learning_rate: float

    def __post_init__(self) -> None:
        optimum = np.asarray(self.optimum, dtype=float).reshape(-1)
        curvature = np.asarray(self.curvature, dtype=float)
        object.__setattr__(self, "optimum", optimum)
        object.__setattr__(self, "curvature", curvature)
        dim = optimum.size
        if not 1 <= dim <= MAX_DIM:
            raise ValueError(f"dim must lie in [1, {MAX_DIM}], got {dim}")
        if curvature.shape != (dim, dim):
            raise ValueError(f"curvature must be {dim}x{dim}, got {curvature.shape}")
        if np.max(np.abs(curvature - curvature.T)) > _SYMMETRY_TOL:
            raise ValueError("curvature must be symmetric")
        eigenvalues = np.linalg.eigvalsh(curvature)
        if np.any(eigenvalues >= 0):
            raise ValueError("curvature must be negative definite")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ValueError(f"learning_rate must lie in (0, 1], got {self.learning_rate}")

    @property
    def dim(self) -> int:
        return self.optimum.size

    def value(self, point: np.ndarray) -> float:
        delta = np.asarray(point, dtype=float) - self.optimum
        return float(delta @ self.curvature @ delta)

    def gradient(self, point: np.ndarray) -> np.ndarray:
        delta = np.asarray(point, dtype=float) - self.optimum
        return 2.0 * self.curvature @ delta

    def hessian(self) -> np.ndarray:
        return 2.0 * self.curvature


def newton_step(objective: QuadraticObjective, point: np.ndarray) -> np.ndarray:
    """One damped Newton ascent step from ``point``."""
    point = np.asarray(point, dtype=float)
    direction = np.linalg.solve(objective.hessian(), objective.gradient(point))
    return point - objective.learning_rate * direction


@dataclass(frozen=True)
class ConvergenceResult:
    converged: bool
    iterations: int
    trajectory: tuple[float, ...]
    final_point: np.ndarray


def converge(
    objective: QuadraticObjective,
    start: np.ndarray,
    tol: float = 1e-6,
    max_iter: int = 50,
) -> ConvergenceResult:
    """Iterate newton_step until within ``tol`` of the optimum.

    Non-convergence inside ``max_iter`` is reported in the result, not
    raised.  The trajectory records the quality value at the start and
    after every step.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    point = np.asarray(start, dtype=float).reshape(-1)
    if point.size != objective.dim:
        raise ValueError(f"start must have dim {objective.dim}, got {point.size}")
    trajectory = [objective.value(point)]
    iterations = 0
    while np.linalg.norm(point - objective.optimum) >= tol and iterations < max_iter:
        point = newton_step(objective, point)
        iterations += 1
        trajectory.append(objective.value(point))
    converged = bool(np.linalg.norm(point - objective.optimum) < tol)
    return ConvergenceResult(
        converged=converged,
        iterations=iterations,
        trajectory=tuple(trajectory),
        final_point=point,
    )


def random_objective(
    dim: int,
    learning_rate: float,
    rng: np.random.Generator,
) -> QuadraticObjective:
    """Random negative-definite quadratic for fuzzing the lab."""
    basis = rng.normal(size=(dim, dim))
    curvature = -(basis.T @ basis + 0.5 * np.eye(dim))
    optimum = rng.normal(scale=3.0, size=dim)
    return QuadraticObjective(optimum=optimum, curvature=curvature, learning_rate=learning_rate)
