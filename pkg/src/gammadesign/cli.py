"""Command-line interface.

Subcommands: ``design`` (construct an optimal design), ``classify``
(subregion of the three-factor cube), ``verify`` (equivalence-theorem
check), ``solve`` (multiplicative algorithm), ``efficiency``
(D-efficiency sweep to CSV), and ``reproduce`` (regenerate the reference
tables and sweeps).

Output is deterministic: floats are printed with 10 significant digits
in JSON and 4 decimals in reproduction CSVs. Validation problems exit
with status 2, computation failures with 1; both write one JSON error
object to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .model_core import (
    Design,
    ExperimentalRegion,
    GammaDesignError,
    GammaModel,
    ModelKind,
    RegionKind,
    ValidationError,
    design_from_json,
    validate_design_region,
    validate_positivity,
)
from .equivalence import (
    Criterion,
    orthant_axis_points,
    region_vertices,
    verify_optimality,
)
from .analytic_designs import (
    ThreeFactorScenario,
    a_optimal_orthant,
    a_optimal_two_factor,
    classify_three_factor,
    d_optimal_interaction,
    d_optimal_orthant,
    d_optimal_two_factor,
    is_simplex_design_d_optimal,
    simplex_design,
    three_factor_vertices,
)
from .solver import SolverParams, multiplicative
from .efficiency import (
    InteractionFamily,
    ThreeFactorFamily,
    efficiency_sweep,
    gamma_grid,
    interaction_benchmark_designs,
    three_factor_benchmark_designs,
)

__all__ = ["main", "run"]

_JSON_FLOAT_FORMAT = "%.10g"
_CSV_FLOAT_FORMAT = "%.4f"


# ---------------------------------------------------------------------------
# Deterministic JSON output. The stdlib encoder prints floats with repr,
# which leaks platform-independent but noisy digits; this emitter pins
# every float to 10 significant digits.

def _dump_json(value, pieces: list[str]) -> None:
    if isinstance(value, dict):
        pieces.append("{")
        for i, (key, item) in enumerate(value.items()):
            if i:
                pieces.append(", ")
            pieces.append(json.dumps(str(key)))
            pieces.append(": ")
            _dump_json(item, pieces)
        pieces.append("}")
    elif isinstance(value, (list, tuple)):
        pieces.append("[")
        for i, item in enumerate(value):
            if i:
                pieces.append(", ")
            _dump_json(item, pieces)
        pieces.append("]")
    elif isinstance(value, bool) or value is None:
        pieces.append(json.dumps(value))
    elif isinstance(value, float):
        pieces.append(_JSON_FLOAT_FORMAT % value)
    elif isinstance(value, int):
        pieces.append(str(value))
    else:
        pieces.append(json.dumps(value))


def render_json(value) -> str:
    pieces: list[str] = []
    _dump_json(value, pieces)
    return "".join(pieces)


def _emit(value, path: str | None) -> None:
    text = render_json(value) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError as exc:
        raise ValidationError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON in {path}: {exc}") from exc


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        values = tuple(float(part) for part in text.split(","))
    except ValueError as exc:
        raise ValidationError(f"{what} must be a comma-separated list of numbers") from exc
    if not values:
        raise ValidationError(f"{what} must be nonempty")
    return values


def _design_payload(design: Design, provenance: str) -> dict:
    return {
        "points": [list(pt) for pt in design.points],
        "weights": list(design.weights),
        "provenance": provenance,
    }


# ---------------------------------------------------------------------------
# Argument plumbing shared by several subcommands.

def _make_model(args) -> GammaModel:
    kind = ModelKind(args.model)
    if kind is ModelKind.INTERACTION:
        if args.nu not in (None, 2):
            raise ValidationError("interaction model requires nu = 2")
        return GammaModel.interaction()
    if args.nu is None:
        raise ValidationError("--nu is required for the first-order model")
    return GammaModel.first_order(args.nu)


def _make_region(args, model: GammaModel) -> ExperimentalRegion:
    kind = RegionKind(args.region)
    if kind is RegionKind.ORTHANT:
        return ExperimentalRegion.orthant(model.nu)
    if args.a is None or args.b is None:
        raise ValidationError("hypercube regions require --a and --b")
    return ExperimentalRegion.hypercube(args.a, args.b, model.nu)


def _require_beta(args, model: GammaModel) -> tuple[float, ...]:
    if args.beta is None:
        raise ValidationError("--beta is required for this configuration")
    beta = _parse_floats(args.beta, "--beta")
    if len(beta) != model.p:
        raise ValidationError(f"--beta must have {model.p} entries for this model")
    return beta


# ---------------------------------------------------------------------------
# Subcommands.

def _cmd_design(args) -> int:
    model = _make_model(args)
    region = _make_region(args, model)
    criterion = Criterion(args.criterion)
    scale = None if args.scale is None else _parse_floats(args.scale, "--scale")

    if model.kind is ModelKind.INTERACTION:
        if region.kind is not RegionKind.HYPERCUBE:
            raise ValidationError("interaction designs are constructed on hypercube regions")
        if criterion is not Criterion.D:
            raise ValidationError("only D-optimal interaction designs are available")
        beta = _require_beta(args, model)
        result = d_optimal_interaction(region.a, region.b, beta)
        if result.design is not None:
            _emit(_design_payload(result.design, "analytic"), args.output)
            return 0
        design, _ = multiplicative(model, beta, region_vertices(region))
        _emit(_design_payload(design, "numerical"), args.output)
        return 0

    if region.kind is RegionKind.ORTHANT:
        if criterion is Criterion.D:
            if args.beta is not None and not validate_positivity(model, _require_beta(args, model), region):
                raise ValidationError("beta violates positivity on the orthant")
            design = d_optimal_orthant(model.nu, scale)
        else:
            design = a_optimal_orthant(_require_beta(args, model), scale)
        _emit(_design_payload(design, "analytic"), args.output)
        return 0

    # first-order model on a hypercube
    if criterion is Criterion.A:
        if model.nu != 2:
            raise ValidationError("A-optimal hypercube designs are available for nu = 2 only")
        design = a_optimal_two_factor(region.a, region.b, _require_beta(args, model))
        _emit(_design_payload(design, "analytic"), args.output)
        return 0
    if model.nu == 2:
        if args.beta is not None and not validate_positivity(model, _require_beta(args, model), region):
            raise ValidationError("beta violates positivity on the square")
        _emit(_design_payload(d_optimal_two_factor(region.a, region.b), "analytic"), args.output)
        return 0
    beta = _require_beta(args, model)
    if not validate_positivity(model, beta, region):
        raise ValidationError("beta violates positivity on the cube")
    if is_simplex_design_d_optimal(model.nu, region.a, region.b, beta):
        _emit(_design_payload(simplex_design(model.nu, region.a, region.b), "analytic"), args.output)
        return 0
    if model.nu == 3 and region.a == 1.0 and region.b == 2.0 and beta[1] == beta[2]:
        result = classify_three_factor(ThreeFactorScenario(beta[0], beta[1]))
        if result.design is not None:
            _emit(_design_payload(result.design, "analytic"), args.output)
            return 0
    design, _ = multiplicative(model, beta, region_vertices(region))
    _emit(_design_payload(design, "numerical"), args.output)
    return 0


def _cmd_classify(args) -> int:
    if args.beta1_sign == "zero":
        scenario = ThreeFactorScenario(0.0, 1.0)
    else:
        if args.gamma is None:
            raise ValidationError("--gamma is required unless --beta1-sign is zero")
        sign = 1.0 if args.beta1_sign == "pos" else -1.0
        scenario = ThreeFactorScenario(sign, sign * args.gamma)
    _emit(classify_three_factor(scenario).to_json(), args.output)
    return 0


def _cmd_verify(args) -> int:
    model = _make_model(args)
    beta = _require_beta(args, model)
    design = design_from_json(_load_json(args.design))
    if args.candidates is not None:
        candidates = [tuple(float(c) for c in pt) for pt in _load_json(args.candidates)]
    elif args.region is not None:
        region = _make_region(args, model)
        validate_design_region(design, region)
        if region.kind is RegionKind.HYPERCUBE:
            candidates = region_vertices(region)
        else:
            candidates = list(design.points) + [
                pt for pt in orthant_axis_points(model.nu) if pt not in design.points
            ]
    else:
        raise ValidationError("either --candidates or --region is required")
    report = verify_optimality(model, beta, design, Criterion(args.criterion), candidates, args.tol)
    _emit(report.to_json(), args.output)
    return 0


def _cmd_solve(args) -> int:
    model = _make_model(args)
    beta = _require_beta(args, model)
    if args.candidates is not None:
        candidates = [tuple(float(c) for c in pt) for pt in _load_json(args.candidates)]
    elif args.region is not None:
        region = _make_region(args, model)
        candidates = region_vertices(region)
    else:
        raise ValidationError("either --candidates or --region is required")
    params = SolverParams(
        max_iterations=args.max_iterations,
        convergence_tol=args.convergence_tol,
        prune_tol=args.prune_tol,
    )
    design, trace = multiplicative(model, beta, candidates, params)
    if args.trace is not None:
        Path(args.trace).write_text(render_json(trace.to_json()) + "\n")
    _emit(_design_payload(design, "numerical"), args.output)
    return 0


def _sweep_for_family(args):
    if args.family == "three-factor":
        family = ThreeFactorFamily()
        designs = three_factor_benchmark_designs()
        start = -0.24 if args.start is None else args.start
        stop = 1.0 if args.stop is None else args.stop
    else:
        a = 1.0 if args.a is None else args.a
        b = 4.0 if args.b is None else args.b
        family = InteractionFamily(a, b)
        designs = interaction_benchmark_designs(a, b)
        start = -0.49 if args.start is None else args.start
        stop = 5.0 if args.stop is None else args.stop
    return efficiency_sweep(family, designs, gamma_grid(start, stop, args.step))


def _cmd_efficiency(args) -> int:
    sweep = _sweep_for_family(args)
    text = sweep.to_csv(_JSON_FLOAT_FORMAT)
    if args.output is None:
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)
    if args.json is not None:
        Path(args.json).write_text(render_json(sweep.to_json()) + "\n")
    return 0


def _cmd_reproduce(args) -> int:
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[str] = []
    if args.target == "table2":
        vertices = three_factor_vertices(1.0, 2.0)
        lines = ["gamma," + ",".join(f"v{k}" for k in range(1, 9))]
        for gamma in (-2.9, -2.5, -2.0, -1.5, -1.23):
            beta = (-1.0, -gamma, -gamma)
            design, _ = multiplicative(GammaModel.first_order(3), beta, vertices)
            by_point = dict(zip(design.points, design.weights))
            row = [gamma] + [by_point.get(v, 0.0) for v in vertices]
            lines.append(",".join(_CSV_FLOAT_FORMAT % value for value in row))
        path = outdir / "table2.csv"
        path.write_text("\n".join(lines) + "\n")
        written.append(str(path))
    elif args.target == "example1":
        sweep = efficiency_sweep(
            ThreeFactorFamily(), three_factor_benchmark_designs(), gamma_grid(-0.24, 1.0)
        )
        path = outdir / "example1.csv"
        path.write_text(sweep.to_csv(_CSV_FLOAT_FORMAT))
        written.append(str(path))
    else:
        sweep = efficiency_sweep(
            InteractionFamily(1.0, 4.0), interaction_benchmark_designs(), gamma_grid(-0.49, 5.0)
        )
        path = outdir / "example2.csv"
        path.write_text(sweep.to_csv(_CSV_FLOAT_FORMAT))
        written.append(str(path))
    sys.stdout.write(render_json({"written": written}) + "\n")
    return 0


# ---------------------------------------------------------------------------
# Parser.

def _add_model_flags(sub, *, region_default: str | None = None) -> None:
    sub.add_argument("--model", choices=[k.value for k in ModelKind], default="first_order")
    sub.add_argument("--nu", type=int, default=None, help="number of factors")
    sub.add_argument("--beta", default=None, help="comma-separated parameter vector")
    sub.add_argument("--region", choices=[k.value for k in RegionKind], default=region_default)
    sub.add_argument("--a", type=float, default=None, help="hypercube lower bound")
    sub.add_argument("--b", type=float, default=None, help="hypercube upper bound")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gammadesign",
        description="Locally optimal designs for gamma models without intercept.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_design = sub.add_parser("design", help="construct a locally optimal design")
    _add_model_flags(p_design, region_default="hypercube")
    p_design.add_argument("--criterion", choices=[c.value for c in Criterion], default="D")
    p_design.add_argument("--scale", default=None, help="axis scales for orthant designs")
    p_design.add_argument("--output", default=None, help="write JSON here instead of stdout")
    p_design.set_defaults(func=_cmd_design)

    p_classify = sub.add_parser("classify", help="three-factor cube subregion for a ratio")
    p_classify.add_argument("--gamma", type=float, default=None, help="ratio beta/beta1")
    p_classify.add_argument("--beta1-sign", choices=["pos", "neg", "zero"], required=True)
    p_classify.add_argument("--output", default=None)
    p_classify.set_defaults(func=_cmd_classify)

    p_verify = sub.add_parser("verify", help="equivalence-theorem check of a design file")
    _add_model_flags(p_verify)
    p_verify.add_argument("--design", required=True, help="design JSON file")
    p_verify.add_argument("--criterion", choices=[c.value for c in Criterion], default="D")
    p_verify.add_argument("--candidates", default=None, help="JSON file with candidate points")
    p_verify.add_argument("--tol", type=float, default=1e-9)
    p_verify.add_argument("--output", default=None)
    p_verify.set_defaults(func=_cmd_verify)

    p_solve = sub.add_parser("solve", help="multiplicative algorithm on a candidate set")
    _add_model_flags(p_solve)
    p_solve.add_argument("--candidates", default=None, help="JSON file with candidate points")
    p_solve.add_argument("--max-iterations", type=int, default=SolverParams.max_iterations)
    p_solve.add_argument("--convergence-tol", type=float, default=SolverParams.convergence_tol)
    p_solve.add_argument("--prune-tol", type=float, default=SolverParams.prune_tol)
    p_solve.add_argument("--trace", default=None, help="write the solver trace JSON here")
    p_solve.add_argument("--output", default=None)
    p_solve.set_defaults(func=_cmd_solve)

    p_eff = sub.add_parser("efficiency", help="D-efficiency sweep over a ratio grid")
    p_eff.add_argument("--family", choices=["three-factor", "interaction"], required=True)
    p_eff.add_argument("--a", type=float, default=None)
    p_eff.add_argument("--b", type=float, default=None)
    p_eff.add_argument("--start", type=float, default=None)
    p_eff.add_argument("--stop", type=float, default=None)
    p_eff.add_argument("--step", type=float, default=0.01)
    p_eff.add_argument("--output", default=None, help="CSV path (stdout when omitted)")
    p_eff.add_argument("--json", default=None, help="also write the sweep as JSON here")
    p_eff.set_defaults(func=_cmd_efficiency)

    p_rep = sub.add_parser("reproduce", help="regenerate reference tables and sweeps")
    p_rep.add_argument("target", choices=["table2", "example1", "example2"])
    p_rep.add_argument("--outdir", default=".")
    p_rep.set_defaults(func=_cmd_reproduce)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        _print_error(exc)
        return 2
    except GammaDesignError as exc:
        _print_error(exc)
        return 1
    except OSError as exc:
        _print_error(exc)
        return 1


def _print_error(exc: Exception) -> None:
    obj = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    sys.stderr.write(render_json(obj) + "\n")


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
