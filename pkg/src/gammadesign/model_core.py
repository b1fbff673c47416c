"""Core objects for gamma-model design problems.

This module defines the model family (first-order or two-factor
interaction predictor, both without intercept), experimental regions,
approximate designs, and the basic quantities built from them: the
intensity function and the normalized information matrix.

The linear predictor is eta(x) = f(x)' beta with f(x) = x for the
first-order model and f(x) = (x1, x2, x1*x2) for the interaction model.
All mean-related constants drop out after normalization, so the
intensity reduces to u(x, beta) = eta(x)**-2, which is only defined
where eta(x) > 0.

Everything here is immutable and side-effect free.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "GammaDesignError",
    "ValidationError",
    "NonpositivePredictor",
    "SingularInformation",
    "RankDeficientCandidates",
    "IterationCapExceeded",
    "ModelKind",
    "RegionKind",
    "GammaModel",
    "ExperimentalRegion",
    "Design",
    "features",
    "intensity",
    "information_matrix",
    "validate_positivity",
    "validate_design_region",
    "mix_designs",
    "model_to_json",
    "model_from_json",
    "region_to_json",
    "region_from_json",
    "design_to_json",
    "design_from_json",
    "COINCIDENCE_TOL",
    "WEIGHT_SUM_TOL",
]

# Two points are considered identical when no coordinate differs by more.
COINCIDENCE_TOL = 1e-12
# Design weights must sum to one within this absolute tolerance.
WEIGHT_SUM_TOL = 1e-12


class GammaDesignError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GammaDesignError, ValueError):
    """An input object or argument violates a documented precondition."""


class NonpositivePredictor(GammaDesignError):
    """The linear predictor is not strictly positive where required."""


class SingularInformation(GammaDesignError):
    """An information matrix is numerically singular."""


class RankDeficientCandidates(GammaDesignError):
    """A candidate set does not span the full parameter dimension."""


class IterationCapExceeded(UserWarning):
    """The iterative solver hit its iteration cap before converging."""


class ModelKind(str, enum.Enum):
    FIRST_ORDER = "first_order"
    INTERACTION = "interaction"


class RegionKind(str, enum.Enum):
    ORTHANT = "orthant"
    HYPERCUBE = "hypercube"


@dataclass(frozen=True)
class GammaModel:
    """A gamma model identified by its predictor structure.

    Parameters
    ----------
    kind:
        ``ModelKind.FIRST_ORDER`` for f(x) = x on ``nu`` factors, or
        ``ModelKind.INTERACTION`` for f(x) = (x1, x2, x1*x2) on two.
    nu:
        Number of experimental factors. Must be >= 2, and exactly 2 for
        the interaction model.
    """

    kind: ModelKind
    nu: int

    def __post_init__(self) -> None:
        if not isinstance(self.nu, int) or isinstance(self.nu, bool):
            raise ValidationError("factor count nu must be an integer")
        if self.kind is ModelKind.FIRST_ORDER and self.nu < 2:
            raise ValidationError("first-order model requires nu >= 2")
        if self.kind is ModelKind.INTERACTION and self.nu != 2:
            raise ValidationError("interaction model is defined for nu = 2 only")

    @property
    def p(self) -> int:
        """Length of the parameter vector."""
        return self.nu if self.kind is ModelKind.FIRST_ORDER else 3

    @staticmethod
    def first_order(nu: int) -> "GammaModel":
        return GammaModel(ModelKind.FIRST_ORDER, nu)

    @staticmethod
    def interaction() -> "GammaModel":
        return GammaModel(ModelKind.INTERACTION, 2)


@dataclass(frozen=True)
class ExperimentalRegion:
    """The set of admissible experimental settings.

    Either the positive orthant (no bounds stored) or the cube
    [a, b]**nu with 0 < a < b.
    """

    kind: RegionKind
    nu: int
    a: float | None = None
    b: float | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.nu, int) or isinstance(self.nu, bool) or self.nu < 1:
            raise ValidationError("region dimension nu must be a positive integer")
        if self.kind is RegionKind.ORTHANT:
            if self.a is not None or self.b is not None:
                raise ValidationError("orthant regions store no bounds")
        else:
            if self.a is None or self.b is None:
                raise ValidationError("hypercube regions require bounds a and b")
            if not (0.0 < self.a < self.b):
                raise ValidationError("hypercube bounds must satisfy 0 < a < b")

    @staticmethod
    def orthant(nu: int) -> "ExperimentalRegion":
        return ExperimentalRegion(RegionKind.ORTHANT, nu)

    @staticmethod
    def hypercube(a: float, b: float, nu: int) -> "ExperimentalRegion":
        return ExperimentalRegion(RegionKind.HYPERCUBE, nu, float(a), float(b))

    def contains(self, x: Sequence[float]) -> bool:
        """Whether ``x`` lies in the region (boundary included)."""
        pt = np.asarray(x, dtype=float)
        if pt.shape != (self.nu,):
            return False
        if self.kind is RegionKind.ORTHANT:
            return bool(np.all(pt >= 0.0) and np.any(pt > 0.0))
        slack = 1e-12 * max(1.0, abs(self.b))
        return bool(np.all(pt >= self.a - slack) and np.all(pt <= self.b + slack))


def _canonical_points(points: Iterable[Sequence[float]]) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(c) for c in pt) for pt in points)


@dataclass(frozen=True)
class Design:
    """An approximate design: finitely many support points with weights.

    Weights are strictly positive and sum to one; support points are
    pairwise distinct (no coordinate-wise coincidence within
    ``COINCIDENCE_TOL``).
    """

    points: tuple[tuple[float, ...], ...]
    weights: tuple[float, ...]

    def __init__(self, points: Iterable[Sequence[float]], weights: Iterable[float]) -> None:
        object.__setattr__(self, "points", _canonical_points(points))
        object.__setattr__(self, "weights", tuple(float(w) for w in weights))
        self._validate()

    def _validate(self) -> None:
        if not self.points:
            raise ValidationError("design needs at least one support point")
        if len(self.points) != len(self.weights):
            raise ValidationError("points and weights must have equal length")
        dim = len(self.points[0])
        if any(len(pt) != dim for pt in self.points):
            raise ValidationError("support points must share one dimension")
        if any(not all(math.isfinite(c) for c in pt) for pt in self.points):
            raise ValidationError("support points must be finite")
        if any(w <= 0.0 or not math.isfinite(w) for w in self.weights):
            raise ValidationError("weights must be strictly positive")
        if abs(sum(self.weights) - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError("weights must sum to one")
        for i in range(len(self.points)):
            for j in range(i + 1, len(self.points)):
                diff = max(abs(u - v) for u, v in zip(self.points[i], self.points[j]))
                if diff < COINCIDENCE_TOL:
                    raise ValidationError("support points must be pairwise distinct")

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def dimension(self) -> int:
        return len(self.points[0])

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.asarray(self.points, dtype=float), np.asarray(self.weights, dtype=float)


def features(model: GammaModel, x: Sequence[float]) -> np.ndarray:
    """Regression vector f(x) of the model at the point ``x``.

    Returns ``x`` itself for the first-order model and
    ``(x1, x2, x1*x2)`` for the interaction model.
    """
    pt = np.asarray(x, dtype=float)
    if pt.shape != (model.nu,):
        raise ValidationError(f"point has dimension {pt.shape}, expected ({model.nu},)")
    if not np.all(np.isfinite(pt)):
        raise ValidationError("point coordinates must be finite")
    if model.kind is ModelKind.FIRST_ORDER:
        return pt
    return np.array([pt[0], pt[1], pt[0] * pt[1]])


def _check_beta(model: GammaModel, beta: Sequence[float]) -> np.ndarray:
    vec = np.asarray(beta, dtype=float)
    if vec.shape != (model.p,):
        raise ValidationError(f"beta has dimension {vec.shape}, expected ({model.p},)")
    if not np.all(np.isfinite(vec)):
        raise ValidationError("beta entries must be finite")
    return vec


def intensity(model: GammaModel, beta: Sequence[float], x: Sequence[float]) -> float:
    """GLM intensity u(x, beta) = (f(x)' beta)**-2.

    Raises
    ------
    NonpositivePredictor
        If f(x)' beta <= 0, where the gamma mean is undefined.
    """
    vec = _check_beta(model, beta)
    eta = float(features(model, x) @ vec)
    if eta <= 0.0:
        raise NonpositivePredictor(f"predictor {eta:.6g} at {tuple(float(c) for c in x)} is not positive")
    return eta**-2


def information_matrix(model: GammaModel, beta: Sequence[float], design: Design) -> np.ndarray:
    """Normalized information matrix M = sum_i w_i u(x_i) f(x_i) f(x_i)'.

    The result is symmetrized by averaging with its transpose; it is
    positive semidefinite by construction.
    """
    vec = _check_beta(model, beta)
    pts, w = design.as_arrays()
    F = np.array([features(model, pt) for pt in pts])
    eta = F @ vec
    bad = np.nonzero(eta <= 0.0)[0]
    if bad.size:
        raise NonpositivePredictor(f"predictor {eta[bad[0]]:.6g} at support point {design.points[bad[0]]} is not positive")
    M = (F * (w * eta**-2)[:, None]).T @ F
    return (M + M.T) / 2.0


def validate_positivity(model: GammaModel, beta: Sequence[float], region: ExperimentalRegion) -> bool:
    """Whether f(x)' beta > 0 holds on the whole region.

    On a hypercube the predictor is affine in each coordinate, so the
    minimum is attained at a vertex and the 2**nu vertices decide the
    answer. On the positive orthant the first-order predictor is
    positive everywhere iff every beta_i > 0; the interaction predictor
    additionally tolerates beta_3 = 0 but no negative entry.
    """
    vec = _check_beta(model, beta)
    if region.nu != model.nu:
        raise ValidationError("region and model dimensions differ")
    if region.kind is RegionKind.ORTHANT:
        if model.kind is ModelKind.FIRST_ORDER:
            return bool(np.all(vec > 0.0))
        return bool(vec[0] > 0.0 and vec[1] > 0.0 and vec[2] >= 0.0)
    for corner in np.ndindex(*(2,) * region.nu):
        vertex = np.where(np.asarray(corner) == 0, region.a, region.b)
        if float(features(model, vertex) @ vec) <= 0.0:
            return False
    return True


def validate_design_region(design: Design, region: ExperimentalRegion) -> None:
    """Raise ValidationError unless every support point lies in the region."""
    if design.dimension != region.nu:
        raise ValidationError("design and region dimensions differ")
    for pt in design.points:
        if not region.contains(pt):
            raise ValidationError(f"support point {pt} lies outside the region")


def mix_designs(designs: Sequence[Design], coefficients: Sequence[float]) -> Design:
    """Convex combination of designs on a common region.

    Support is the union of the component supports; points closer than
    ``COINCIDENCE_TOL`` in every coordinate are merged by adding their
    weights. Points whose combined weight is zero (zero coefficient)
    are dropped.
    """
    if len(designs) == 0:
        raise ValidationError("need at least one design to mix")
    if len(coefficients) != len(designs):
        raise ValidationError("one coefficient per design is required")
    coeffs = [float(c) for c in coefficients]
    if any(c < 0.0 for c in coeffs) or abs(sum(coeffs) - 1.0) > WEIGHT_SUM_TOL:
        raise ValidationError("coefficients must be nonnegative and sum to one")
    dim = designs[0].dimension
    if any(d.dimension != dim for d in designs):
        raise ValidationError("designs must share one dimension")

    merged_points: list[tuple[float, ...]] = []
    merged_weights: list[float] = []
    for design, coeff in zip(designs, coeffs):
        for pt, w in zip(design.points, design.weights):
            for k, seen in enumerate(merged_points):
                if max(abs(u - v) for u, v in zip(pt, seen)) < COINCIDENCE_TOL:
                    merged_weights[k] += coeff * w
                    break
            else:
                merged_points.append(pt)
                merged_weights.append(coeff * w)
    keep = [k for k, w in enumerate(merged_weights) if w > 0.0]
    return Design([merged_points[k] for k in keep], [merged_weights[k] for k in keep])


# ---------------------------------------------------------------------------
# JSON-facing converters. Field names are part of the public interface.

def model_to_json(model: GammaModel) -> dict:
    return {"kind": model.kind.value, "nu": model.nu}


def model_from_json(obj: dict) -> GammaModel:
    try:
        kind = ModelKind(obj["kind"])
        nu = int(obj["nu"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad model object: {exc}") from exc
    return GammaModel(kind, nu)


def region_to_json(region: ExperimentalRegion) -> dict:
    out: dict = {"kind": region.kind.value, "nu": region.nu}
    if region.kind is RegionKind.HYPERCUBE:
        out["a"] = region.a
        out["b"] = region.b
    return out


def region_from_json(obj: dict) -> ExperimentalRegion:
    try:
        kind = RegionKind(obj["kind"])
        nu = int(obj["nu"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad region object: {exc}") from exc
    if kind is RegionKind.ORTHANT:
        return ExperimentalRegion.orthant(nu)
    try:
        a = float(obj["a"])
        b = float(obj["b"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad region bounds: {exc}") from exc
    return ExperimentalRegion.hypercube(a, b, nu)


def design_to_json(design: Design) -> dict:
    return {"points": [list(pt) for pt in design.points], "weights": list(design.weights)}


def design_from_json(obj: dict) -> Design:
    try:
        points = obj["points"]
        weights = obj["weights"]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad design object: {exc}") from exc
    try:
        weights = [float(w) for w in weights]
    except (TypeError, ValueError) as exc:
        raise ValidationError("weights must be numbers") from exc
    # Serialized weights carry formatting round-off (10 significant digits),
    # so a sum near one is repaired here; anything further off is an error.
    total = math.fsum(weights)
    if total > 0.0 and 0.0 < abs(total - 1.0) <= 1e-8:
        weights = [w / total for w in weights]
    return Design(points, weights)
