"""Command-line front end.

Every command writes a JSON or CSV document to ``--output`` (stdout by
default). Exit codes: 0 success, 1 computation error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import spectral, structured
from .circulant import abs_circulant, strang_circulant
from .eigensolve import singular_values, sym_eig
from .krylov import preconditioned_spectrum, solve_flipped
from .symbol import Symbol, load_symbol, parse_symbol

SPECTRUM_FAMILIES = ("flipped_toeplitz", "toeplitz", "circulant", "abs_circulant",
                     "flip_circulant", "hankel_plus")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    symbol: str | None
    sizes: list[int]
    symbol_file: str | None = None
    output: str | None = None
    format: str = "json"
    seed: int = 0
    mode: str | None = None
    family: str | None = None
    rtol: float = 1e-8
    maxit: int | None = None
    grid: int | None = None
    hats: int = 16
    radius: float = 0.1
    preconditioner: str = "abs_circulant"
    workers: int = 1


def _parse_sizes(text: str) -> list[int]:
    try:
        sizes = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad size list {text!r}") from None
    if not sizes or any(n < 1 for n in sizes):
        raise argparse.ArgumentTypeError("sizes must be positive integers")
    return sizes


def _family_matrix(f: Symbol, family: str, n: int) -> np.ndarray:
    if family == "flipped_toeplitz":
        return structured.flipped_toeplitz(f, n)
    if family == "toeplitz":
        return structured.toeplitz(f, n)
    if family == "circulant":
        return strang_circulant(f, n).materialize()
    if family == "abs_circulant":
        return abs_circulant(strang_circulant(f, n)).materialize()
    if family == "flip_circulant":
        return structured.flip(n) @ strang_circulant(f, n).materialize()
    if family == "hankel_plus":
        return structured.hankel_block(f, n, "plus")
    raise ConfigError(f"unknown family {family!r}")


def _csv(header: str, rows) -> str:
    buf = io.StringIO()
    buf.write(header + "\n")
    for row in rows:
        buf.write(",".join(repr(x) if isinstance(x, float) else str(x) for x in row) + "\n")
    return buf.getvalue()


def _spectrum(cfg: RunConfig, f: Symbol) -> str:
    family = cfg.family or "flipped_toeplitz"
    mode = cfg.mode or "eigen"
    reports = []
    for n in cfg.sizes:
        A = _family_matrix(f, family, n)
        reports.append(sym_eig(A) if mode == "eigen" else singular_values(A))
    if cfg.format == "csv":
        return _csv("n,value", ((r.n, float(v)) for r in reports for v in r.values))
    return json.dumps({"symbol": f.name, "family": family, "mode": mode,
                       "reports": [r.to_dict() for r in reports]}, indent=2)


def _inertia(cfg: RunConfig, f: Symbol) -> str:
    table = spectral.inertia_asymptotics(f, cfg.sizes, workers=cfg.workers)
    return table.to_csv() if cfg.format == "csv" else json.dumps(table.to_dict(), indent=2)


def _distcheck(cfg: RunConfig, f: Symbol) -> str:
    family = cfg.family or "flipped_toeplitz"
    check = spectral.distribution_check(f, family, sorted(set(cfg.sizes)), cfg.mode or "singular",
                                        n_hats=cfg.hats, quad_points=cfg.grid,
                                        workers=cfg.workers)
    return check.to_csv() if cfg.format == "csv" else json.dumps(check.to_dict(), indent=2)


def _acs(cfg: RunConfig, f: Symbol) -> str:
    certs = [spectral.acs_split_check(f, n) for n in cfg.sizes]
    if cfg.format == "csv":
        return _csv("n,degree,rank,flipped_rank,rank_bound,norm_term_norm,c_m,omega_m",
                    ((c.n, c.m, c.rank_term_rank, c.flipped_rank_term_rank, c.rank_bound,
                      c.norm_term_norm, c.c_m, c.omega_m) for c in certs))
    return json.dumps({"symbol": f.name, "certificates": [c.to_dict() for c in certs]}, indent=2)


def _precond(cfg: RunConfig, f: Symbol) -> str:
    results = []
    for n in cfg.sizes:
        report = preconditioned_spectrum(f, n)
        frac = spectral.cluster_measure(report.values, (-1.0, 1.0), cfg.radius)
        results.append((n, frac, report))
    if cfg.format == "csv":
        return _csv("n,radius,fraction_outside,min,max",
                    ((n, cfg.radius, frac, float(r.values[0]), float(r.values[-1]))
                     for n, frac, r in results))
    return json.dumps({"symbol": f.name, "centers": [-1.0, 1.0], "radius": cfg.radius,
                       "results": [{"n": n, "fraction_outside": frac, "spectrum": r.to_dict()}
                                   for n, frac, r in results]}, indent=2)


def _solve(cfg: RunConfig, f: Symbol) -> str:
    reports = []
    for n in cfg.sizes:
        # one stream per size so adding sizes never changes an existing run
        b = np.random.default_rng([cfg.seed, n]).standard_normal(n)
        _, report = solve_flipped(f, b, cfg.preconditioner, cfg.rtol, cfg.maxit, cfg.seed)
        reports.append(report)
    if cfg.format == "csv":
        return _csv("n,iteration,residual",
                    ((r.n, i, h) for r in reports for i, h in enumerate(r.residual_history, 1)))
    return json.dumps({"symbol": f.name, "reports": [r.to_dict() for r in reports]}, indent=2)


HANDLERS = {"spectrum": _spectrum, "inertia": _inertia, "distcheck": _distcheck,
            "acs": _acs, "precond": _precond, "solve": _solve}


def resolve_symbol(cfg: RunConfig) -> Symbol:
    try:
        if cfg.symbol_file:
            path = Path(cfg.symbol_file)
            f = parse_symbol(path.read_text(), label=path.stem)
        elif cfg.symbol:
            f = load_symbol(cfg.symbol)
        else:
            raise ValueError("no symbol given")
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None
    if not f.is_real:
        raise ConfigError(f"symbol {f.name!r} has non-real coefficients; the flip "
                          "symmetrization needs real Fourier coefficients")
    return f


def run(cfg: RunConfig) -> int:
    if cfg.command not in HANDLERS:
        print(f"error: unknown command {cfg.command!r}", file=sys.stderr)
        return 2
    try:
        f = resolve_symbol(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        text = HANDLERS[cfg.command](cfg, f)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"computation failed: {exc}", file=sys.stderr)
        return 1
    if not text.endswith("\n"):
        text += "\n"
    if cfg.output:
        try:
            Path(cfg.output).write_text(text)
        except OSError as exc:
            print(f"error: cannot write {cfg.output}: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    src = common.add_mutually_exclusive_group(required=True)
    src.add_argument("--symbol", help="builtin symbol name or path to a k=value file")
    src.add_argument("--symbol-file", help="path to a k=value symbol file")
    common.add_argument("--sizes", type=_parse_sizes, required=True,
                        help="comma-separated matrix sizes, e.g. 100,200")
    common.add_argument("--output", help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1,
                        help="processes for independent sizes (inertia, distcheck)")

    parser = argparse.ArgumentParser(prog="symtoep", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="sorted eigen/singular values")
    p.add_argument("--family", choices=SPECTRUM_FAMILIES, default="flipped_toeplitz")
    p.add_argument("--mode", choices=("eigen", "singular"), default="eigen")

    sub.add_parser("inertia", parents=[common], help="inertia of Y_n T_n[f] per size")

    p = sub.add_parser("distcheck", parents=[common], help="distribution functionals vs symbol")
    p.add_argument("--family", choices=spectral.FAMILIES, default="flipped_toeplitz")
    p.add_argument("--mode", choices=("singular", "eigen"), default="singular")
    p.add_argument("--grid", type=int, help="quadrature points (overrides TSL_QUAD_POINTS)")
    p.add_argument("--hats", type=int, default=16, help="number of hat partitions")

    sub.add_parser("acs", parents=[common], help="Toeplitz minus Strang circulant rank split")

    p = sub.add_parser("precond", parents=[common], help="|C_n|-preconditioned spectrum")
    p.add_argument("--radius", type=float, default=0.1)

    p = sub.add_parser("solve", parents=[common], help="MINRES on Y_n T_n[f] x = Y_n b")
    p.add_argument("--rtol", type=float, default=1e-8)
    p.add_argument("--maxit", type=int)
    p.add_argument("--preconditioner", choices=("abs_circulant", "none"),
                   default="abs_circulant")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, symbol=args.symbol, symbol_file=args.symbol_file,
                    sizes=args.sizes, output=args.output, format=args.format, seed=args.seed,
                    workers=args.workers)
    for name in ("mode", "family", "rtol", "maxit", "grid", "hats", "radius", "preconditioner"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
