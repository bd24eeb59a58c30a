"""Command-line front end: ``hyperlab check | trace | linearize | reproduce``."""

import argparse
import inspect
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import bvp, conditions
from .models import (CONSTRUCTORS, BadParams, CauchyLaw, InvariantModel, LogStrainModel,
                     OutOfDomain, PrincipalStretchModel)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAIL = 2

PARAM_FLAGS = ("mu", "lam", "alpha", "beta", "gamma")

FIGURES = {
    "fig1": {"program": "uniaxial", "constructor": "uniaxial_family",
             "params": [{"alpha": a} for a in (0.0, 0.25, 0.5, 0.75)],
             "grid": "-2:4:401"},
    "fig2": {"program": "shear", "constructor": "shear_family",
             "params": [{"alpha": a, "beta": 1.0} for a in (0.25, 0.5, 0.75)],
             "grid": "-8:8:401"},
}

DEFAULT_GRIDS = {"uniaxial": "-2:4:401", "shear": "-8:8:401", "incompressible": "-2:2:401"}


class SpecError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    constructor: str
    params: dict = field(default_factory=dict)
    clip: float = conditions.CLIP

    @classmethod
    def from_dict(cls, d: dict) -> "ModelSpec":
        if not isinstance(d, dict):
            raise SpecError("model spec must be an object")
        extra = set(d) - {"constructor", "params", "clip"}
        if extra:
            raise SpecError(f"unknown spec field(s): {', '.join(sorted(extra))}")
        if "constructor" not in d:
            raise SpecError("missing field 'constructor'")
        spec = cls(d["constructor"], dict(d.get("params", {})), float(d.get("clip", conditions.CLIP)))
        spec.validate()
        return spec

    @classmethod
    def from_json(cls, text: str) -> "ModelSpec":
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as e:
            raise SpecError(f"spec is not valid JSON: {e}") from None

    def to_dict(self) -> dict:
        return {"constructor": self.constructor, "params": dict(self.params), "clip": self.clip}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def validate(self):
        if self.constructor not in CONSTRUCTORS:
            raise SpecError(f"constructor: unknown model {self.constructor!r} "
                            f"(choose from {', '.join(sorted(CONSTRUCTORS))})")
        if not 0 < self.clip <= 1:
            raise SpecError(f"clip: must lie in (0, 1], got {self.clip}")
        sig = inspect.signature(CONSTRUCTORS[self.constructor])
        for name in self.params:
            if name not in sig.parameters:
                raise SpecError(f"params.{name}: not a parameter of {self.constructor}")
        for name, p in sig.parameters.items():
            if p.default is inspect.Parameter.empty and name not in self.params:
                raise SpecError(f"params.{name}: required by {self.constructor}")

    def build(self):
        try:
            return CONSTRUCTORS[self.constructor](**self.params)
        except BadParams as e:
            raise SpecError(f"params: {e}") from None


def parse_grid(text: str) -> np.ndarray:
    try:
        lo, hi, n = text.split(":")
        lo, hi, n = float(lo), float(hi), int(n)
    except ValueError:
        raise SpecError(f"grid: expected 'start:stop:count', got {text!r}") from None
    if n < 3 or not hi > lo:
        raise SpecError(f"grid: need stop > start and count >= 3, got {text!r}")
    return np.linspace(lo, hi, n)


def _param_value(text: str):
    parts = [float(p) for p in text.split(",")]
    return parts[0] if len(parts) == 1 else parts


def spec_from_args(args) -> ModelSpec:
    flags = {k: getattr(args, k) for k in PARAM_FLAGS if getattr(args, k, None) is not None}
    if args.spec:
        d = json.loads(Path(args.spec).read_text())
        if args.model:
            d["constructor"] = args.model
        d.setdefault("params", {}).update(flags)
        return ModelSpec.from_dict(d)
    if not args.model:
        raise SpecError("model: pass --model or --spec")
    return ModelSpec.from_dict({"constructor": args.model, "params": flags})


def seed_from(args) -> int:
    env = os.environ.get("HYPERLAB_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise SpecError(f"HYPERLAB_SEED: not an integer: {env!r}") from None
    return args.seed


# -- checks ------------------------------------------------------------------

CHECKS = {
    "polyconvex": conditions.check_polyconvex_sufficient,
    "tstsm": conditions.check_tstsm_sufficient,
    "tstsm_numeric": conditions.check_tstsm_numeric,
    "tstsm_plus": conditions.check_tstsm_plus,
    "hill": None,
    "lh": conditions.check_legendre_hadamard,
    "ball": None,
}


def default_checks(model) -> list:
    if isinstance(model, InvariantModel):
        return ["polyconvex", "tstsm"]
    if isinstance(model, LogStrainModel):
        return ["hill", "tstsm_numeric"]
    if isinstance(model, CauchyLaw):
        return ["tstsm_numeric"]
    return ["ball"]


def run_check(name, model, plan, x_grid=None):
    if name == "hill":
        if isinstance(model, InvariantModel) and not model.depends[2]:
            return conditions.check_hill_invariant(model, plan)
        return conditions.check_hill(model, plan)
    if name == "ball":
        if not isinstance(model, PrincipalStretchModel):
            raise TypeError("ball check needs an incompressible principal-stretch model")
        return conditions.check_ball_potential(model, x_grid)
    if name == "tstsm" and not isinstance(model, InvariantModel):
        return conditions.check_tstsm_numeric(model, plan)
    return CHECKS[name](model, plan)


def _clean(obj):
    """Replace non-finite floats by ``None`` so the report is strict JSON."""
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(_clean(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _emit(text, output):
    if output:
        Path(output).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)


def cmd_check(args) -> int:
    spec = spec_from_args(args)
    model = spec.build()
    names = args.checks.split(",") if args.checks else default_checks(model)
    for n in names:
        if n not in CHECKS:
            raise SpecError(f"checks: unknown check {n!r} (choose from {', '.join(CHECKS)})")
    plan = conditions.SamplingPlan(mode=args.mode, radius=args.radius, n=args.samples,
                                   seed=seed_from(args))
    records = []
    for n in names:
        try:
            rep = run_check(n, model, plan, parse_grid(args.grid or DEFAULT_GRIDS["incompressible"]))
        except TypeError as e:
            raise SpecError(f"checks: {e}") from None
        records.append({"check": n, **rep.to_dict()})
    report = {"schema_version": SCHEMA_VERSION, "command": "check", "model": spec.to_dict(),
              "seed": plan.seed, "results": records}
    _emit(dump_json(report), args.output)
    return EXIT_FAIL if any(r["verdict"] == conditions.FAIL for r in records) else EXIT_OK


# -- traces ------------------------------------------------------------------

TRACE_COLUMNS = {
    "uniaxial": ("lambda2", "sigma11", "sigma22", "energy"),
    "incompressible": ("lambda2", "sigma11", "sigma11_potential", "sigma22", "energy"),
    "shear": ("sigma11", "sigma22", "sigma12", "energy"),
}


def run_trace(program, model, grid):
    if program == "uniaxial":
        return bvp.trace_uniaxial(model, grid)
    if program == "incompressible":
        if not isinstance(model, PrincipalStretchModel):
            raise SpecError("model: incompressible traces need incompressible_ogden")
        return bvp.trace_uniaxial_incompressible(model, grid)
    return bvp.trace_shear(model, grid)


def _cell(v) -> str:
    return "%.17e" % v if math.isfinite(v) else ""


def trace_csv(trace: bvp.Trace, program: str) -> str:
    cols = TRACE_COLUMNS[program]
    lines = [",".join(("control",) + cols)]
    for i, x in enumerate(trace.control):
        lines.append(",".join([_cell(x)] + [_cell(trace[c][i]) for c in cols]))
    return "\n".join(lines) + "\n"


def _trace_summary(trace, report, program) -> dict:
    return {"program": program, "rows": int(trace.control.size),
            "failed_rows": int(np.sum(~np.isfinite(trace["sigma11"]))),
            "monotone": report.is_monotone,
            "extrema": [{"control": x, "value": v, "kind": k} for x, v, k in report.extrema]}


def cmd_trace(args) -> int:
    spec = spec_from_args(args)
    model = spec.build()
    grid = parse_grid(args.grid or DEFAULT_GRIDS[args.program])
    trace, report = run_trace(args.program, model, grid)
    failed = int(np.sum(~np.isfinite(trace["sigma11"])))
    if failed:
        print(f"warning: {failed} row(s) failed to solve", file=sys.stderr)
    _emit(trace_csv(trace, args.program), args.output)
    return EXIT_OK


def cmd_linearize(args) -> int:
    spec = spec_from_args(args)
    lin = conditions.linearize(spec.build())
    report = {"schema_version": SCHEMA_VERSION, "command": "linearize", "model": spec.to_dict(),
              **lin.to_dict(), "young": lin.young}
    _emit(dump_json(report), args.output)
    return EXIT_OK


def reproduce(figure: str, outdir: Path) -> dict:
    """Write one CSV per legend entry of ``figure`` plus ``manifest.json``."""
    if figure not in FIGURES:
        raise SpecError(f"figure: unknown id {figure!r} (choose from {', '.join(FIGURES)})")
    cfg = FIGURES[figure]
    outdir.mkdir(parents=True, exist_ok=True)
    grid = parse_grid(cfg["grid"])
    entries = []
    for params in cfg["params"]:
        spec = ModelSpec.from_dict({"constructor": cfg["constructor"], "params": params})
        trace, report = run_trace(cfg["program"], spec.build(), grid)
        name = f"{figure}_alpha{params['alpha']:g}.csv"
        (outdir / name).write_text(trace_csv(trace, cfg["program"]), newline="\n")
        entries.append({"file": name, "model": spec.to_dict(),
                        **_trace_summary(trace, report, cfg["program"])})
    manifest = {"schema_version": SCHEMA_VERSION, "figure": figure, "program": cfg["program"],
                "grid": cfg["grid"], "columns": ["control", *TRACE_COLUMNS[cfg["program"]]],
                "entries": entries}
    (outdir / "manifest.json").write_text(dump_json(manifest), newline="\n")
    return manifest


def cmd_reproduce(args) -> int:
    reproduce(args.figure, Path(args.outdir or args.figure))
    return EXIT_OK


# -- parser ------------------------------------------------------------------


def _model_args(p):
    p.add_argument("--model", help="constructor name")
    p.add_argument("--spec", help="JSON model spec file")
    p.add_argument("--mu", type=_param_value)
    p.add_argument("--lambda", dest="lam", type=_param_value)
    p.add_argument("--alpha", type=_param_value)
    p.add_argument("--beta", type=_param_value)
    p.add_argument("--gamma", type=_param_value)
    p.add_argument("-o", "--output", help="write here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hyperlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="run stability-condition checkers")
    _model_args(p)
    p.add_argument("--checks", help=f"comma list from {','.join(CHECKS)}")
    p.add_argument("--mode", choices=("random", "grid"), default="random")
    p.add_argument("--radius", type=float, default=2.0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", help="x grid for the ball check, start:stop:count")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="tabulate a homogeneous deformation program as CSV")
    p.add_argument("program", choices=tuple(TRACE_COLUMNS))
    _model_args(p)
    p.add_argument("--grid", help="start:stop:count")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("linearize", help="small-strain Lame constants")
    _model_args(p)
    p.set_defaults(func=cmd_linearize)

    p = sub.add_parser("reproduce", help="figure presets")
    p.add_argument("figure")
    p.add_argument("--outdir")
    p.set_defaults(func=cmd_reproduce)
    return parser


_VALUE_FLAGS = {"--grid", "--mu", "--lambda", "--alpha", "--beta", "--gamma", "--radius"}


def _attach_values(argv):
    """Glue ``--grid -2:4:401`` into ``--grid=-2:4:401`` so argparse keeps negative values."""
    out, it = [], iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_values(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (SpecError, BadParams, OutOfDomain, bvp.NoBracket, bvp.NonConvergence,
            OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
