"""Multiplicative algorithm for D-optimal weights on a finite candidate set.

Starting from uniform weights, each step rescales every weight by its
D-sensitivity over the parameter count, w_i <- w_i * psi(x_i)/p. The
weighted average of the sensitivities equals p, so the simplex is
preserved and the log-determinant never decreases. Iteration stops once
the largest sensitivity excess drops to the convergence tolerance.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model_core import (
    Design,
    GammaModel,
    IterationCapExceeded,
    NonpositivePredictor,
    RankDeficientCandidates,
    ValidationError,
    features,
)

__all__ = ["SolverParams", "SolverTrace", "multiplicative"]


@dataclass(frozen=True)
class SolverParams:
    """Iteration cap, stopping tolerance, and reporting threshold."""

    max_iterations: int = 100_000
    convergence_tol: float = 1e-8
    prune_tol: float = 1e-6

    def __post_init__(self) -> None:
        if self.max_iterations < 1:
            raise ValidationError("max_iterations must be at least 1")
        if self.convergence_tol <= 0.0 or self.prune_tol <= 0.0:
            raise ValidationError("tolerances must be positive")


@dataclass(frozen=True)
class SolverTrace:
    """Convergence record: one log-det entry per visited weight vector."""

    iterations: int
    log_dets: tuple[float, ...]
    final_excess: float
    converged: bool

    def to_json(self) -> dict:
        return {
            "iterations": self.iterations,
            "log_dets": list(self.log_dets),
            "final_excess": self.final_excess,
            "converged": self.converged,
        }


def multiplicative(
    model: GammaModel,
    beta: Sequence[float],
    candidates: Sequence[Sequence[float]],
    params: SolverParams = SolverParams(),
) -> tuple[Design, SolverTrace]:
    """D-optimal weights over ``candidates`` at the parameter point ``beta``.

    The returned design drops candidates whose converged weight falls
    below ``params.prune_tol`` and renormalizes the rest. If the
    iteration cap is hit first, the best weights found so far are
    returned and an ``IterationCapExceeded`` warning is emitted; the
    trace's ``converged`` flag records which case occurred.
    """
    if len(candidates) == 0:
        raise ValidationError("candidate set must be nonempty")
    vec = np.asarray(beta, dtype=float)
    if vec.shape != (model.p,):
        raise ValidationError(f"beta has dimension {vec.shape}, expected ({model.p},)")
    F = np.array([features(model, pt) for pt in candidates])
    eta = F @ vec
    if np.any(eta <= 0.0):
        k = int(np.nonzero(eta <= 0.0)[0][0])
        raise NonpositivePredictor(f"predictor {eta[k]:.6g} at candidate {tuple(candidates[k])} is not positive")
    u = eta**-2.0
    p = model.p
    if np.linalg.matrix_rank(np.sqrt(u)[:, None] * F) < p:
        raise RankDeficientCandidates("candidate set does not span the parameter dimension")

    m = len(candidates)
    w = np.full(m, 1.0 / m)
    log_dets: list[float] = []
    converged = False
    excess = np.inf
    # one evaluation per visited weight vector: at most max_iterations updates
    for step in range(params.max_iterations + 1):
        M = (F * (w * u)[:, None]).T @ F
        sign, logdet = np.linalg.slogdet(M)
        log_dets.append(logdet if sign > 0 else -np.inf)
        psi = u * np.einsum("ij,ji->i", F, np.linalg.solve(M, F.T))
        excess = float(psi.max() - p)
        if excess <= params.convergence_tol:
            converged = True
            break
        if step == params.max_iterations:
            break
        w *= psi / p
        w /= w.sum()

    if not converged:
        warnings.warn(
            f"multiplicative solver stopped after {params.max_iterations} iterations "
            f"with sensitivity excess {excess:.3e}",
            IterationCapExceeded,
            stacklevel=2,
        )
    keep = np.nonzero(w >= params.prune_tol)[0]
    kept_w = w[keep]
    design = Design([tuple(float(c) for c in candidates[k]) for k in keep], kept_w / kept_w.sum())
    trace = SolverTrace(
        iterations=len(log_dets) - 1,
        log_dets=tuple(log_dets),
        final_excess=excess,
        converged=converged,
    )
    return design, trace
