"""Sensitivity functions and optimality verification on candidate sets.

A design is locally D-optimal iff its D-sensitivity
psi(x) = u(x, beta) f(x)' M^-1 f(x) stays below the parameter count p
everywhere, and locally A-optimal iff u(x, beta) f(x)' M^-2 f(x) stays
below tr(M^-1). Both bounds are attained at the support points of an
optimal design. Verification here is over finite candidate sets; for
hypercubes the vertices form an essentially complete class, so they are
the canonical candidates.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model_core import (
    Design,
    ExperimentalRegion,
    GammaModel,
    NonpositivePredictor,
    RegionKind,
    SingularInformation,
    ValidationError,
    features,
)

__all__ = [
    "Criterion",
    "VerificationReport",
    "region_vertices",
    "orthant_axis_points",
    "sensitivity",
    "verify_optimality",
    "DEFAULT_TOL",
]

# Default ceiling on the sensitivity excess accepted as "optimal".
DEFAULT_TOL = 1e-9
# |det M| below this multiple of the row-norm product counts as singular.
_SINGULARITY_RTOL = 1e-14


class Criterion(str, enum.Enum):
    D = "D"
    A = "A"


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of checking the optimality bound over a candidate set."""

    criterion: Criterion
    bound: float
    points: tuple[tuple[float, ...], ...]
    sensitivities: tuple[float, ...]
    worst_point: tuple[float, ...]
    worst_excess: float
    passed: bool

    def to_json(self) -> dict:
        return {
            "criterion": self.criterion.value,
            "bound": self.bound,
            "worst_point": list(self.worst_point),
            "worst_excess": self.worst_excess,
            "pass": self.passed,
            "values": [
                {"point": list(pt), "sensitivity": s}
                for pt, s in zip(self.points, self.sensitivities)
            ],
        }


def region_vertices(region: ExperimentalRegion) -> list[tuple[float, ...]]:
    """All 2**nu vertices of a hypercube, in lexicographic order (a < b,
    first coordinate varying slowest). Orthants have no vertices."""
    if region.kind is not RegionKind.HYPERCUBE:
        raise ValidationError("only hypercube regions have vertices")
    return [pt for pt in itertools.product((region.a, region.b), repeat=region.nu)]


def orthant_axis_points(nu: int, scale: Sequence[float] | None = None) -> list[tuple[float, ...]]:
    """The canonical orthant candidates a_i * e_i (unit axis points by default)."""
    if nu < 1:
        raise ValidationError("nu must be positive")
    if scale is None:
        scale = [1.0] * nu
    if len(scale) != nu:
        raise ValidationError("scale must have one entry per factor")
    if any(s <= 0 for s in scale):
        raise ValidationError("scale entries must be positive")
    pts = []
    for i, s in enumerate(scale):
        pt = [0.0] * nu
        pt[i] = float(s)
        pts.append(tuple(pt))
    return pts


def _checked_inverse(M: np.ndarray) -> np.ndarray:
    row_norms = np.abs(M).max(axis=1)
    det = float(np.linalg.det(M))
    if abs(det) < _SINGULARITY_RTOL * float(np.prod(row_norms)) or det == 0.0:
        raise SingularInformation(f"information matrix is numerically singular (det {det:.3e})")
    return np.linalg.inv(M)


def _design_arrays(model: GammaModel, beta: np.ndarray, design: Design) -> tuple[np.ndarray, np.ndarray]:
    F = np.array([features(model, pt) for pt in design.points])
    eta = F @ beta
    if np.any(eta <= 0.0):
        k = int(np.nonzero(eta <= 0.0)[0][0])
        raise NonpositivePredictor(f"predictor {eta[k]:.6g} at support point {design.points[k]} is not positive")
    return F, eta**-2


def _candidate_arrays(model: GammaModel, beta: np.ndarray, points: Sequence[Sequence[float]]) -> tuple[np.ndarray, np.ndarray]:
    F = np.array([features(model, pt) for pt in points])
    eta = F @ beta
    if np.any(eta <= 0.0):
        k = int(np.nonzero(eta <= 0.0)[0][0])
        raise NonpositivePredictor(f"predictor {eta[k]:.6g} at candidate {tuple(points[k])} is not positive")
    return F, eta**-2


def _sensitivity_values(M: np.ndarray, F: np.ndarray, u: np.ndarray, criterion: Criterion) -> tuple[np.ndarray, float]:
    """Sensitivities of the candidates (rows of F) and the criterion bound."""
    inv = _checked_inverse(M)
    if criterion is Criterion.D:
        core = inv
        bound = float(M.shape[0])
    else:
        core = inv @ inv
        bound = float(np.trace(inv))
    vals = u * np.einsum("ij,jk,ik->i", F, core, F)
    return vals, bound


def sensitivity(
    model: GammaModel,
    beta: Sequence[float],
    design: Design,
    x: Sequence[float],
    criterion: Criterion = Criterion.D,
) -> float:
    """Sensitivity of the design at one point under the given criterion."""
    vec = np.asarray(beta, dtype=float)
    Fd, ud = _design_arrays(model, vec, design)
    w = np.asarray(design.weights, dtype=float)
    M = (Fd * (w * ud)[:, None]).T @ Fd
    Fc, uc = _candidate_arrays(model, vec, [x])
    vals, _ = _sensitivity_values((M + M.T) / 2.0, Fc, uc, criterion)
    return float(vals[0])


def _report_from_arrays(
    M: np.ndarray,
    F_cand: np.ndarray,
    u_cand: np.ndarray,
    cand_points: Sequence[Sequence[float]],
    criterion: Criterion,
    tol: float,
) -> VerificationReport:
    vals, bound = _sensitivity_values(M, F_cand, u_cand, criterion)
    worst = int(np.argmax(vals))  # ties resolved by first index
    excess = float(vals[worst] - bound)
    return VerificationReport(
        criterion=criterion,
        bound=bound,
        points=tuple(tuple(float(c) for c in pt) for pt in cand_points),
        sensitivities=tuple(float(v) for v in vals),
        worst_point=tuple(float(c) for c in cand_points[worst]),
        worst_excess=excess,
        passed=excess <= tol,
    )


def verify_optimality(
    model: GammaModel,
    beta: Sequence[float],
    design: Design,
    criterion: Criterion,
    candidates: Sequence[Sequence[float]],
    tol: float = DEFAULT_TOL,
) -> VerificationReport:
    """Check the equivalence-theorem bound at every candidate point.

    The report records each candidate's sensitivity; the design passes
    iff the largest excess over the bound is at most ``tol``.
    """
    if len(candidates) == 0:
        raise ValidationError("candidate set must be nonempty")
    vec = np.asarray(beta, dtype=float)
    Fd, ud = _design_arrays(model, vec, design)
    w = np.asarray(design.weights, dtype=float)
    M = (Fd * (w * ud)[:, None]).T @ Fd
    Fc, uc = _candidate_arrays(model, vec, candidates)
    return _report_from_arrays((M + M.T) / 2.0, Fc, uc, candidates, criterion, tol)
