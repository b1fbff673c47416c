"""Reductions of intercept-free models to intercept models.

Two reductions are implemented. For the interaction model on a square,
the coordinatewise map z_j = ((1/x_j) - 1/b) / ((1/a) - 1/b) carries
[a,b]^2 onto [0,1]^2 and turns the model into a two-factor intercept
model; D-optimality is preserved in both directions. For the
first-order model, dividing by the first coordinate yields ratio
coordinates t_j = x_{j+1}/x_1 on a polytope, which shows that interior
points such as the images of (a,..,a) and (b,..,b) never support an
optimal design.

Note the vertex pairing of the square map: it sends (b,a) to (0,1) and
(a,b) to (1,0), since a larger x_j gives a smaller z_j in the same
coordinate slot.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model_core import Design, NonpositivePredictor, ValidationError
from .equivalence import Criterion, VerificationReport, _report_from_arrays

__all__ = [
    "InterceptTransform",
    "map_point_interaction",
    "unmap_point_interaction",
    "map_design_interaction",
    "interaction_to_intercept",
    "verify_intercept_design",
    "induced_polytope_vertices",
    "first_order_ratio_map",
    "UNIT_SQUARE_VERTICES",
]

# Corners of the target square [0,1]^2, fixed candidate order.
UNIT_SQUARE_VERTICES = ((0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0))


def _check_bounds(a: float, b: float) -> None:
    if not 0.0 < a < b:
        raise ValidationError("bounds must satisfy 0 < a < b")


def map_point_interaction(x: Sequence[float], a: float, b: float) -> tuple[float, float]:
    """Map a point of [a,b]^2 to [0,1]^2, coordinate by coordinate."""
    _check_bounds(a, b)
    pt = np.asarray(x, dtype=float)
    if pt.shape != (2,):
        raise ValidationError("point must have two coordinates")
    slack = 1e-12 * b
    if np.any(pt < a - slack) or np.any(pt > b + slack):
        raise ValidationError(f"point {tuple(pt)} lies outside [{a}, {b}]^2")
    span = 1.0 / a - 1.0 / b
    z = (1.0 / pt - 1.0 / b) / span
    return (float(z[0]), float(z[1]))


def unmap_point_interaction(z: Sequence[float], a: float, b: float) -> tuple[float, float]:
    """Inverse of ``map_point_interaction``."""
    _check_bounds(a, b)
    pt = np.asarray(z, dtype=float)
    if pt.shape != (2,):
        raise ValidationError("point must have two coordinates")
    slack = 1e-12
    if np.any(pt < -slack) or np.any(pt > 1.0 + slack):
        raise ValidationError(f"point {tuple(pt)} lies outside [0, 1]^2")
    span = 1.0 / a - 1.0 / b
    x = 1.0 / (pt * span + 1.0 / b)
    return (float(x[0]), float(x[1]))


def map_design_interaction(design: Design, a: float, b: float) -> Design:
    """Image of a design on [a,b]^2 under the square map, weights kept."""
    return Design([map_point_interaction(pt, a, b) for pt in design.points], design.weights)


@dataclass(frozen=True)
class InterceptTransform:
    """Intercept-model parameters equivalent to an interaction-model point.

    The predictor on the target square is
    beta0 + beta1 * z_1 + beta2 * z_2, and the intensity is its inverse
    square. The corner intensities c_k line up with the vertex-dropping
    conditions of the source model.
    """

    a: float
    b: float
    beta0: float
    beta1: float
    beta2: float

    def predictor(self, z: Sequence[float]) -> float:
        pt = np.asarray(z, dtype=float)
        if pt.shape != (2,):
            raise ValidationError("point must have two coordinates")
        return float(self.beta0 + self.beta1 * pt[0] + self.beta2 * pt[1])

    def intensity(self, z: Sequence[float]) -> float:
        eta = self.predictor(z)
        if eta <= 0.0:
            raise NonpositivePredictor(f"intercept predictor {eta:.6g} at {tuple(float(c) for c in z)} is not positive")
        return eta**-2

    def vertex_intensities(self) -> tuple[float, float, float, float]:
        """Intensities c_1..c_4 at (0,0), (1,0), (0,1), (1,1)."""
        return tuple(self.intensity(z) for z in UNIT_SQUARE_VERTICES)


def interaction_to_intercept(a: float, b: float, beta: Sequence[float]) -> InterceptTransform:
    """Transformed parameters of the equivalent intercept model on [0,1]^2."""
    _check_bounds(a, b)
    vec = np.asarray(beta, dtype=float)
    if vec.shape != (3,):
        raise ValidationError("beta must have three entries")
    span = 1.0 / a - 1.0 / b
    return InterceptTransform(
        a=a,
        b=b,
        beta0=float(vec[2] + (vec[0] + vec[1]) / b),
        beta1=float(vec[1] * span),
        beta2=float(vec[0] * span),
    )


def verify_intercept_design(
    transform: InterceptTransform,
    design: Design,
    criterion: Criterion = Criterion.D,
    candidates: Sequence[Sequence[float]] | None = None,
    tol: float = 1e-9,
) -> VerificationReport:
    """Optimality check of a design living on the target square [0,1]^2.

    Candidates default to the four corners, which decide optimality for
    this model class.
    """
    if candidates is None:
        candidates = UNIT_SQUARE_VERTICES
    if len(candidates) == 0:
        raise ValidationError("candidate set must be nonempty")
    pts, w = design.as_arrays()
    if pts.shape[1] != 2:
        raise ValidationError("design must live on the two-factor square")
    F_design = np.column_stack([np.ones(len(pts)), pts])
    u_design = np.array([transform.intensity(pt) for pt in pts])
    M = (F_design * (w * u_design)[:, None]).T @ F_design
    cand = np.asarray(candidates, dtype=float)
    F_cand = np.column_stack([np.ones(len(cand)), cand])
    u_cand = np.array([transform.intensity(pt) for pt in cand])
    return _report_from_arrays((M + M.T) / 2.0, F_cand, u_cand, candidates, criterion, tol)


def induced_polytope_vertices(a: float, b: float) -> list[tuple[float, float]]:
    """Vertices of the ratio-coordinate region for three factors on [a,b]^3.

    The images of (a,a,a) and (b,b,b) coincide at (1,1), which lies in
    the interior of this hexagon, so neither cube vertex can support an
    optimal design.
    """
    _check_bounds(a, b)
    lo, hi = a / b, b / a
    return [(lo, 1.0), (1.0, lo), (lo, lo), (hi, 1.0), (1.0, hi), (hi, hi)]


def first_order_ratio_map(x: Sequence[float]) -> tuple[float, ...]:
    """Ratio coordinates t_j = x_{j+1}/x_1, scale-free in x."""
    pt = np.asarray(x, dtype=float)
    if pt.ndim != 1 or pt.size < 2:
        raise ValidationError("point must have at least two coordinates")
    if pt[0] <= 0.0:
        raise ValidationError("first coordinate must be positive")
    return tuple(float(c) for c in pt[1:] / pt[0])
