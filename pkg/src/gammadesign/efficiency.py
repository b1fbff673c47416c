"""D-efficiencies and efficiency sweeps across parameter ratios.

The D-efficiency of a design against the locally optimal one is
(det M(design) / det M(optimal))**(1/p). Sweeps trace this value over a
grid of the ratio gamma that indexes the optimality subregions, using
the closed-form reference design where one exists and the multiplicative
solver elsewhere.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .model_core import (
    Design,
    GammaModel,
    SingularInformation,
    ValidationError,
    information_matrix,
)
from .analytic_designs import (
    Classification,
    ThreeFactorScenario,
    classify_three_factor,
    interaction_equal_beta,
    interaction_vertices,
    three_factor_vertices,
    xi3_weights,
)
from .solver import SolverParams, multiplicative

__all__ = [
    "d_efficiency",
    "EfficiencySweep",
    "ThreeFactorFamily",
    "InteractionFamily",
    "gamma_grid",
    "efficiency_sweep",
    "three_factor_benchmark_designs",
    "interaction_benchmark_designs",
]

# Solver tolerance for reference designs without a closed form; tight
# enough that reference error stays far below sweep reporting precision.
_REFERENCE_TOL = 1e-10


def _checked_logdet(M: np.ndarray) -> float:
    sign, logdet = np.linalg.slogdet(M)
    row_norms = np.abs(M).max(axis=1)
    scale = float(np.sum(np.log(row_norms))) if np.all(row_norms > 0.0) else -np.inf
    if sign <= 0.0 or logdet < np.log(1e-14) + scale:
        raise SingularInformation("information matrix is numerically singular")
    return float(logdet)


def d_efficiency(model: GammaModel, beta: Sequence[float], design: Design, optimal: Design) -> float:
    """Efficiency of ``design`` relative to ``optimal`` at the point ``beta``."""
    ld_design = _checked_logdet(information_matrix(model, beta, design))
    ld_optimal = _checked_logdet(information_matrix(model, beta, optimal))
    return float(np.exp((ld_design - ld_optimal) / model.p))


@dataclass(frozen=True)
class ThreeFactorFamily:
    """Parameter path (beta_1, beta, beta) = sign * (1, gamma, gamma) on [1,2]^3."""

    beta1_sign: int = 1

    def __post_init__(self) -> None:
        if self.beta1_sign not in (-1, 1):
            raise ValidationError("beta1_sign must be +1 or -1")

    @property
    def name(self) -> str:
        sign = "+" if self.beta1_sign > 0 else "-"
        return f"three_factor_cube_beta1{sign}"

    @property
    def model(self) -> GammaModel:
        return GammaModel.first_order(3)

    def scenario(self, gamma: float) -> ThreeFactorScenario:
        return ThreeFactorScenario(float(self.beta1_sign), self.beta1_sign * gamma)

    def admissible(self, gamma: float) -> bool:
        try:
            self.scenario(gamma)
        except ValidationError:
            return False
        return True

    def beta(self, gamma: float) -> tuple[float, float, float]:
        return self.scenario(gamma).beta_vector()

    def reference(self, gamma: float) -> Design:
        """Locally D-optimal design at this ratio, solved numerically on
        the subregion without a closed form."""
        result: Classification = classify_three_factor(self.scenario(gamma))
        if result.design is not None:
            return result.design
        design, _ = multiplicative(
            self.model,
            self.beta(gamma),
            three_factor_vertices(1.0, 2.0),
            SolverParams(convergence_tol=_REFERENCE_TOL),
        )
        return design


@dataclass(frozen=True)
class InteractionFamily:
    """Parameter path (gamma, gamma, 1) for the interaction model on [a,b]^2."""

    a: float = 1.0
    b: float = 4.0

    def __post_init__(self) -> None:
        if not 0.0 < self.a < self.b:
            raise ValidationError("bounds must satisfy 0 < a < b")

    @property
    def name(self) -> str:
        return f"interaction_square_{self.a:g}_{self.b:g}"

    @property
    def model(self) -> GammaModel:
        return GammaModel.interaction()

    def admissible(self, gamma: float) -> bool:
        return gamma > -self.a / 2.0

    def beta(self, gamma: float) -> tuple[float, float, float]:
        return (float(gamma), float(gamma), 1.0)

    def reference(self, gamma: float) -> Design:
        result = interaction_equal_beta(self.a, self.b, gamma)
        assert result.design is not None
        return result.design


@dataclass(frozen=True)
class EfficiencySweep:
    """Efficiencies of named designs over a ratio grid."""

    scenario: str
    gammas: tuple[float, ...]
    design_names: tuple[str, ...]
    values: tuple[tuple[float, ...], ...]
    skipped: tuple[str, ...]

    def column(self, name: str) -> tuple[float, ...]:
        idx = self.design_names.index(name)
        return tuple(row[idx] for row in self.values)

    def to_json(self) -> dict:
        return {
            "scenario": self.scenario,
            "gammas": list(self.gammas),
            "designs": list(self.design_names),
            "values": [list(row) for row in self.values],
            "skipped": list(self.skipped),
        }

    def to_csv(self, float_format: str = "%.10g") -> str:
        lines = ["gamma," + ",".join(self.design_names)]
        for g, row in zip(self.gammas, self.values):
            lines.append(",".join(float_format % value for value in (g, *row)))
        return "\n".join(lines) + "\n"


def gamma_grid(start: float, stop: float, step: float = 0.01) -> tuple[float, ...]:
    """Inclusive grid from start to stop built by integer stepping."""
    if step <= 0.0:
        raise ValidationError("step must be positive")
    count = int(round((stop - start) / step))
    if count < 0 or abs(start + count * step - stop) > 1e-9:
        raise ValidationError("stop must be reachable from start in whole steps")
    return tuple(start + k * step for k in range(count + 1))


def efficiency_sweep(
    family: ThreeFactorFamily | InteractionFamily,
    designs: Mapping[str, Design],
    gammas: Sequence[float],
) -> EfficiencySweep:
    """Efficiency of each design against the local optimum at every ratio.

    Inadmissible grid points are skipped and recorded in ``skipped``.
    """
    if not designs:
        raise ValidationError("need at least one design to sweep")
    names = tuple(designs)
    kept: list[float] = []
    rows: list[tuple[float, ...]] = []
    skipped: list[str] = []
    for gamma in gammas:
        if not family.admissible(gamma):
            skipped.append(f"gamma={gamma:g} is outside the admissible range")
            continue
        beta = family.beta(gamma)
        reference = family.reference(gamma)
        ld_ref = _checked_logdet(information_matrix(family.model, beta, reference))
        row = []
        for name in names:
            ld = _checked_logdet(information_matrix(family.model, beta, designs[name]))
            row.append(float(np.exp((ld - ld_ref) / family.model.p)))
        kept.append(float(gamma))
        rows.append(tuple(row))
    return EfficiencySweep(family.name, tuple(kept), names, tuple(rows), tuple(skipped))


def three_factor_benchmark_designs() -> dict[str, Design]:
    """The designs compared on [1,2]^3: the three subregion optima, the
    full factorial, both half fractions, and the 27-point grid."""
    v = three_factor_vertices(1.0, 2.0)
    grid = list(itertools.product((1.0, 1.5, 2.0), repeat=3))
    return {
        "xi1": Design([v[1], v[2], v[3]], [1 / 3] * 3),
        "xi2": Design([v[2], v[3], v[4]], [1 / 3] * 3),
        "xi3": Design([v[1], v[2], v[3], v[4]], xi3_weights(-1.0 / 7.0)),
        "xi4": Design(v, [1 / 8] * 8),
        "xi5": Design([v[0], v[4], v[5], v[6]], [1 / 4] * 4),
        "xi6": Design([v[1], v[2], v[3], v[7]], [1 / 4] * 4),
        "xi7": Design(grid, [1 / 27] * 27),
    }


def interaction_benchmark_designs(a: float = 1.0, b: float = 4.0) -> dict[str, Design]:
    """The designs compared on [a,b]^2: both three-vertex optima, the
    uniform vertex design, and the 9-point grid."""
    v = interaction_vertices(a, b)
    mid = (a + b) / 2.0
    grid = list(itertools.product((a, mid, b), repeat=2))
    return {
        "xi1": Design([v[0], v[1], v[2]], [1 / 3] * 3),
        "xi2": Design([v[1], v[2], v[3]], [1 / 3] * 3),
        "xi3": Design(v, [1 / 4] * 4),
        "xi4": Design(grid, [1 / 9] * 9),
    }
