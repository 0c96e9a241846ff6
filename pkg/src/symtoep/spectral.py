"""Asymptotic spectral statements measured at finite n.

Distribution functionals (1/n) sum F(value_j) are compared with their symbol
integrals; inertia, clustering and approximating-class splits are reported as
tables. Nothing here hard-fails on a slow convergence rate: thresholds belong
to the caller.
"""

from __future__ import annotations

import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Iterable, Sequence

import numpy as np

from . import structured
from .circulant import strang_circulant
from .eigensolve import SpectrumReport, numerical_rank, singular_values, sym_eig
from .symbol import Symbol, TestFunction, default_quad_points, real_values, sample, test_functions

FAMILIES = ("toeplitz", "flipped_toeplitz", "strang_circ", "flip_circ", "hankel_plus")


def _map_ordered(fn: Callable, items: Sequence, workers: int) -> list:
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def family_matrix(f: Symbol, family: str, n: int) -> np.ndarray:
    if family == "toeplitz":
        return structured.toeplitz(f, n)
    if family == "flipped_toeplitz":
        return structured.flipped_toeplitz(f, n)
    if family == "strang_circ":
        return strang_circulant(f, n).materialize()
    if family == "flip_circ":
        return structured.flip(n) @ strang_circulant(f, n).materialize()
    if family == "hankel_plus":
        return structured.hankel_block(f, n, "plus")
    raise ValueError(f"unknown matrix family {family!r} (known: {', '.join(FAMILIES)})")


def _family_is_symmetric(f: Symbol, family: str) -> bool:
    if family in ("flipped_toeplitz", "flip_circ", "hankel_plus"):
        return True
    return f.is_even


def _spectrum(n: int, f: Symbol, family: str, mode: str) -> np.ndarray:
    A = family_matrix(f, family, n)
    report = singular_values(A) if mode == "singular" else sym_eig(A)
    return report.values


def _analytic(f: Symbol, family: str, mode: str, funcs: list[TestFunction],
              quad_points: int) -> dict[str, float]:
    if family == "hankel_plus":
        # Hankel sequences are distributed as the zero symbol
        return {F.id: float(F(np.zeros(1))[0]) for F in funcs}
    s = sample(f, quad_points)
    if mode == "singular":
        x = np.abs(s.values)
        return {F.id: float(np.mean(F(x))) for F in funcs}
    if family in ("flipped_toeplitz", "flip_circ"):
        # eigenvalues of the flipped sequences split evenly between +|f| and -|f|
        x = np.abs(s.values)
        return {F.id: float(0.5 * (np.mean(F(x)) + np.mean(F(-x)))) for F in funcs}
    x = real_values(f, s)
    return {F.id: float(np.mean(F(x))) for F in funcs}


@dataclass
class DistributionCheck:
    symbol: str
    family: str
    mode: str
    sizes: list[int]
    test_functions: list[str]
    empirical: dict[tuple[int, str], float]
    analytic: dict[str, float]
    residuals: dict[tuple[int, str], float]
    monotone_violations: list[tuple[str, int, int]] = field(default_factory=list)

    def aggregate_residual(self, n: int, prefix: str = "hat_") -> float:
        """max over test functions whose id starts with ``prefix``."""
        return max(r for (m, fid), r in self.residuals.items()
                   if m == n and fid.startswith(prefix))

    def rows(self) -> list[tuple[int, str, float, float, float]]:
        return [(n, fid, self.empirical[n, fid], self.analytic[fid], self.residuals[n, fid])
                for n in self.sizes for fid in self.test_functions]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,F_id,empirical,analytic,residual\n")
        for n, fid, emp, ana, res in self.rows():
            buf.write(f"{n},{fid},{emp!r},{ana!r},{res!r}\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "symbol": self.symbol, "family": self.family, "mode": self.mode,
            "sizes": list(self.sizes), "test_functions": list(self.test_functions),
            "analytic": dict(self.analytic),
            "rows": [{"n": n, "F_id": fid, "empirical": e, "analytic": a, "residual": r}
                     for n, fid, e, a, r in self.rows()],
            "aggregate_residual": {str(n): self.aggregate_residual(n) for n in self.sizes},
            "monotone_violations": [list(v) for v in self.monotone_violations],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def distribution_check(f: Symbol, family: str, sizes: Iterable[int], mode: str = "singular",
                       n_hats: int = 16, quad_points: int | None = None,
                       workers: int = 1) -> DistributionCheck:
    """Empirical vs analytic distribution functionals over a test-function dictionary."""
    sizes = [int(n) for n in sizes]
    if not sizes or any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("sizes must be non-empty and strictly increasing")
    if family not in FAMILIES:
        raise ValueError(f"unknown matrix family {family!r} (known: {', '.join(FAMILIES)})")
    if mode not in ("singular", "eigen"):
        raise ValueError(f"mode must be 'singular' or 'eigen', got {mode!r}")
    if mode == "eigen" and not _family_is_symmetric(f, family):
        raise ValueError(f"eigen mode needs symmetric matrices; family {family!r} "
                         f"with symbol {f.name!r} is not symmetric")
    quad_points = default_quad_points() if quad_points is None else quad_points

    funcs = test_functions(f.l1_norm, n_hats)
    analytic = _analytic(f, family, mode, funcs, quad_points)
    spectra = _map_ordered(partial(_spectrum, f=f, family=family, mode=mode), sizes, workers)

    empirical, residuals = {}, {}
    for n, values in zip(sizes, spectra):
        for F in funcs:
            e = float(np.mean(F(values)))
            empirical[n, F.id] = e
            residuals[n, F.id] = abs(e - analytic[F.id])

    violations = []
    for F in funcs:
        for a, b in zip(sizes, sizes[1:]):
            if residuals[b, F.id] > residuals[a, F.id]:
                violations.append((F.id, a, b))
    return DistributionCheck(f.name, family, mode, sizes, [F.id for F in funcs],
                             empirical, analytic, residuals, violations)


# -- sparsely vanishing -----------------------------------------------------

def sparsely_vanishing_estimate(f: Symbol, M_list: Iterable[float],
                                grid: int = 2**16) -> list[tuple[float, float]]:
    """Fraction of the uniform grid where |f| < 1/M, for each M."""
    if grid < 1024:
        raise ValueError("grid must have at least 1024 points")
    mag = np.abs(sample(f, grid).values)
    out = []
    for M in M_list:
        if M <= 0:
            raise ValueError("M must be positive")
        out.append((float(M), float(np.mean(mag < 1.0 / M))))
    return out


def is_sv_consistent(estimates: Sequence[tuple[float, float]]) -> bool:
    """Fractions nonincreasing in M and either already 0 or strictly falling."""
    fr = [x for _, x in sorted(estimates)]
    if any(b > a for a, b in zip(fr, fr[1:])):
        return False
    return fr[-1] == 0.0 or fr[-1] < fr[0]


# -- approximating class split ----------------------------------------------

class CertificationError(RuntimeError):
    """A bound that holds by construction failed; points at a bug."""


@dataclass
class AcsSplit:
    """T_n[p] = B + R + N with B the Strang circulant and N = 0."""

    n: int
    m: int  # degree of the polynomial symbol
    rank_term_rank: int
    flipped_rank_term_rank: int
    norm_term_norm: float
    c_m: float
    omega_m: float
    rank_bound: int
    A: np.ndarray = field(repr=False)
    B: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)
    N: np.ndarray = field(repr=False)

    def to_dict(self) -> dict:
        return {"n": self.n, "m": self.m, "rank_term_rank": self.rank_term_rank,
                "flipped_rank_term_rank": self.flipped_rank_term_rank,
                "norm_term_norm": self.norm_term_norm, "c_m": self.c_m,
                "omega_m": self.omega_m, "rank_bound": self.rank_bound}


def acs_split_check(f: Symbol, n: int) -> AcsSplit:
    M = f.degree
    if n <= 2 * M:
        raise ValueError(f"need n > 2*degree = {2 * M}, got n={n}")
    A = structured.toeplitz(f, n)
    B = strang_circulant(f, n).materialize()
    R = A - B
    N = np.zeros_like(A)
    rank = numerical_rank(R)
    flipped_rank = numerical_rank(structured.flip(n) @ R)
    bound = 2 * M
    if rank > bound:
        raise CertificationError(f"rank(T - C) = {rank} exceeds 2*degree = {bound}")
    if flipped_rank != rank:
        raise CertificationError(f"rank(Y (T - C)) = {flipped_rank} differs from rank {rank}")
    return AcsSplit(n, M, rank, flipped_rank, 0.0, bound / n, 0.0, bound, A, B, R, N)


# -- inertia -----------------------------------------------------------------

@dataclass
class InertiaTable:
    symbol: str
    rows: list[tuple[int, int, int, int, int]]  # n, plus, minus, zero, |plus - minus|

    @property
    def max_diff(self) -> int:
        return max(r[4] for r in self.rows)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("n,plus,minus,zero,diff\n")
        for row in self.rows:
            buf.write(",".join(str(x) for x in row) + "\n")
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"symbol": self.symbol, "max_diff": self.max_diff,
                "rows": [dict(zip(("n", "plus", "minus", "zero", "diff"), r))
                         for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _inertia_row(n: int, f: Symbol) -> tuple[int, int, int, int, int]:
    plus, minus, zero = sym_eig(structured.flipped_toeplitz(f, n)).inertia
    return n, plus, minus, zero, abs(plus - minus)


def inertia_asymptotics(f: Symbol, sizes: Iterable[int], workers: int = 1) -> InertiaTable:
    sizes = [int(n) for n in sizes]
    if not sizes:
        raise ValueError("sizes must be non-empty")
    rows = _map_ordered(partial(_inertia_row, f=f), sizes, workers)
    return InertiaTable(f.name, rows)


# -- clustering --------------------------------------------------------------

def cluster_measure(values, centers: Iterable[float], radius: float) -> float:
    """Fraction of values farther than ``radius`` from every center."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    centers = np.asarray(list(centers), dtype=float)
    dist = np.min(np.abs(values[:, None] - centers[None, :]), axis=1)
    return float(np.mean(dist > radius))


def zero_cluster_fraction(report: SpectrumReport, rel_tol: float = 1e-3) -> float:
    """Fraction of |values| above rel_tol * max|value|; 0 for the zero matrix."""
    mag = np.abs(report.values)
    top = float(mag.max(initial=0.0))
    if top == 0.0:
        return 0.0
    return float(np.mean(mag > rel_tol * top))
