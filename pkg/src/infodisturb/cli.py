"""Command-line interface: ``infodisturb {eval,sweep,figure,verify,identities}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import io
import math
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from . import derivatives as dv
from . import verification as vf
from .oracle import MIN_SAMPLES
from .quantities import MeasurementSpec, evaluate
from .tradeoff import Plane, boundary_set, curvature, is_degenerate, sample_curve, slope

FIGURE_GRID = 1001
FIGURES = (1, 2, 3, 4, 5)
COMMANDS = ("eval", "sweep", "figure", "verify", "identities")
DEFAULT_SUITES = ("mc", "jackknife", "reversal", "fd", "limits", "signs")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    d: int = None
    k: int = None
    l: int = None
    lam: float = None
    grid: int = FIGURE_GRID
    plane: str = None
    figure: int = None
    seed: int = 2024
    samples: int = 1_000_000
    workers: int = 1
    out: str = None
    only: str = None
    bound: int = 20

    def spec(self) -> MeasurementSpec:
        for name in ("d", "k", "l"):
            if getattr(self, name) is None:
                raise UsageError(f"--{name} is required for {self.command}")
        return MeasurementSpec(self.d, self.k, self.l, 0.0 if self.lam is None else self.lam)

    def lambda_grid(self) -> np.ndarray:
        if self.grid < 2:
            raise UsageError(f"grid size must be >= 2, got {self.grid}")
        return np.linspace(0.0, 1.0, self.grid)


# -- CSV rendering -----------------------------------------------------------------

def fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    v = float(value)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "+inf" if v > 0 else "-inf"
    return "%.17g" % v


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(text: str, path):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


# -- commands ---------------------------------------------------------------------

def _planes(config):
    return [Plane.parse(config.plane)] if config.plane else list(Plane)


def cmd_eval(config: RunConfig) -> int:
    if config.lam is None:
        raise UsageError("--lambda is required for eval")
    spec = config.spec()
    q = evaluate(spec)
    rows = [(f.name, getattr(q, f.name)) for f in fields(q)]
    b = dv.derivative_bundle(spec)
    for f in fields(b):
        rows.append((f.name, getattr(b, f.name)))
    rows.append(("alpha", dv.alpha(spec).value))
    for plane in _planes(config):
        rows.append((f"slope_{plane.label}", slope(plane, spec)))
        rows.append((f"curvature_{plane.label}", curvature(plane, spec)))
    _emit(render_csv(("quantity", "value"), rows), config.out)
    return 0


def cmd_sweep(config: RunConfig) -> int:
    if config.plane is None:
        raise UsageError("--plane is required for sweep")
    spec = config.spec()
    plane = Plane.parse(config.plane)
    degenerate = is_degenerate(plane, spec.d, spec.k, spec.l)
    samples = sample_curve(plane, spec.d, spec.k, spec.l, config.lambda_grid())
    rows = [(s.lam, s.info, s.disturbance, s.slope, s.curvature, degenerate) for s in samples]
    header = ("lambda", plane.info_axis, plane.disturbance_axis, "slope", "curvature", "degenerate")
    _emit(render_csv(header, rows), config.out)
    return 0


def _lines(d, invertible_only=False):
    return [(k, l) for k, l in vf.all_kl(d) if not invertible_only or k + l == d]


def figure_tables(config: RunConfig) -> dict:
    """File name -> CSV text for one figure; order and content are deterministic."""
    if config.figure not in FIGURES:
        raise UsageError(f"unknown figure id {config.figure}; expected one of {FIGURES}")
    if config.d is None:
        raise UsageError("--d is required for figure")
    d = config.d
    MeasurementSpec(d, 1, 1, 0.0)
    grid = config.lambda_grid()
    tables = {}
    if config.figure == 1:
        for plane in _planes(config):
            rows = []
            for k, l in _lines(d):
                for s in sample_curve(plane, d, k, l, grid):
                    rows.append((k, l, s.lam, s.info, s.disturbance))
            tables[f"fig1_{plane.label}.csv"] = render_csv(("k", "l", "lambda", "info", "disturbance"), rows)
        rows = [(c.role, c.k, c.l, c.start_rank, c.end_rank) for c in boundary_set(d)]
        tables["fig1_boundary.csv"] = render_csv(("role", "k", "l", "start_rank", "end_rank"), rows)
    elif config.figure in (2, 3):
        fn = dv.dI_dlam2 if config.figure == 2 else dv.d2I_dlam2
        rows = []
        for k, l in _lines(d):
            for lam in grid:
                rows.append((k, l, float(lam), fn(MeasurementSpec(d, k, l, float(lam)))))
        tables[f"fig{config.figure}.csv"] = render_csv(("k", "l", "lambda", "value"), rows)
    else:
        # R planes only carry the invertible lines; the rest are identically zero
        for plane in _planes(config):
            rows = []
            for k, l in _lines(d, invertible_only=plane.disturbance_axis == "R"):
                for s in sample_curve(plane, d, k, l, grid):
                    rows.append((k, l, s.info, s.slope if config.figure == 4 else s.curvature))
            tables[f"fig{config.figure}_{plane.label}.csv"] = render_csv(("k", "l", "info", "value"), rows)
    return tables


def cmd_figure(config: RunConfig) -> int:
    tables = figure_tables(config)
    out = config.out or "."
    os.makedirs(out, exist_ok=True)
    for name, text in tables.items():
        _emit(text, os.path.join(out, name))
        print(os.path.join(out, name))
    return 0


def _run_suite(name, config):
    dmax = config.d
    if name == "mc":
        dims = range(2, (dmax or 5) + 1)
        return vf.mc_suite(dims=dims, n_samples=config.samples, seed=config.seed, workers=config.workers)
    if name == "jackknife":
        return vf.jackknife_suite(seed=config.seed)
    if name == "reversal":
        return vf.reversal_suite(n_samples=config.samples, seed=config.seed, workers=config.workers)
    if name == "fd":
        return vf.fd_suite(dmax=dmax or 6)
    if name == "limits":
        return vf.limits_suite(dmax=dmax or 6, literal_infinity=False)
    if name == "signs":
        return vf.signs_suite(dmax=dmax or 8)
    if name == "identities":
        return vf.identity_suite(bound=config.bound)
    raise UsageError(f"unknown suite {name!r}; expected one of {vf.SUITES}")


def _report(checks) -> int:
    failed = 0
    for c in checks:
        print(c.line())
        failed += not c.passed
    print(f"{len(checks) - failed}/{len(checks)} checks passed")
    return 1 if failed else 0


def cmd_verify(config: RunConfig) -> int:
    if config.samples < MIN_SAMPLES:
        raise UsageError(f"sample count below minimum: need --samples >= {MIN_SAMPLES}, got {config.samples}")
    if config.only is not None and config.only not in vf.SUITES:
        raise UsageError(f"unknown suite {config.only!r}; expected one of {vf.SUITES}")
    if config.d is not None and config.d < 2:
        raise UsageError(f"d out of range: need d >= 2, got {config.d}")
    suites = (config.only,) if config.only else DEFAULT_SUITES
    checks = []
    for name in suites:
        checks.extend(_run_suite(name, config))
    return _report(checks)


def cmd_identities(config: RunConfig) -> int:
    if config.bound < 2:
        raise UsageError(f"bound must be >= 2, got {config.bound}")
    return _report(vf.identity_suite(bound=config.bound))


HANDLERS = {"eval": cmd_eval, "sweep": cmd_sweep, "figure": cmd_figure,
            "verify": cmd_verify, "identities": cmd_identities}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="infodisturb",
                                     description="Information-disturbance tradeoff curves for qudit measurements.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--d", type=int)
    parser.add_argument("--k", type=int)
    parser.add_argument("--l", type=int)
    parser.add_argument("--lambda", dest="lam", type=float)
    parser.add_argument("--grid", type=int, default=FIGURE_GRID, help="number of lambda grid points")
    parser.add_argument("--plane", help="gf, gr, if or ir")
    parser.add_argument("--figure", type=int)
    parser.add_argument("--seed", type=int, default=2024)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--workers", type=int, default=1, help="Monte Carlo worker threads")
    parser.add_argument("--out", help="output file (eval, sweep) or directory (figure)")
    parser.add_argument("--only", help=f"run one verification suite: {', '.join(vf.SUITES)}")
    parser.add_argument("--bound", type=int, default=20, help="k+l bound for identities")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    config = RunConfig(**vars(args))
    try:
        if config.plane is not None:
            Plane.parse(config.plane)
        return HANDLERS[config.command](config)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
