"""Preconditioned MINRES for the flipped system Y T x = Y b."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import structured
from .circulant import CirculantSpec, abs_circulant, apply_inverse, check_nonsingular, strang_circulant
from .eigensolve import SpectrumReport, sym_eig
from .symbol import Symbol

Operator = Callable[[np.ndarray], np.ndarray]


class SymmetryError(ValueError):
    pass


@dataclass
class SolveReport:
    n: int
    iterations: int
    residual_history: list[float]
    converged: bool
    preconditioner: str = "none"
    breakdown: bool = False
    true_residual: float = field(default=math.nan)

    def to_dict(self) -> dict:
        return {"n": self.n, "iterations": self.iterations, "converged": self.converged,
                "breakdown": self.breakdown, "preconditioner": self.preconditioner,
                "true_residual": self.true_residual,
                "residual_history": list(self.residual_history)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def check_operator(apply: Operator, n: int, rng: np.random.Generator,
                   positive: bool = False, trials: int = 3, what: str = "operator") -> None:
    """Randomized test of <Ax, y> == <x, Ay> (and <x, Ax> > 0 if ``positive``)."""
    for _ in range(trials):
        x = rng.standard_normal(n)
        y = rng.standard_normal(n)
        ax, ay = apply(x), apply(y)
        nx, ny = np.linalg.norm(x), np.linalg.norm(y)
        scale = max(np.linalg.norm(ax) / nx, np.linalg.norm(ay) / ny)
        gap = abs(float(ax @ y) - float(x @ ay))
        if gap > 1e-10 * nx * ny * scale:
            raise SymmetryError(f"{what} is not symmetric (asymmetry {gap:.3g})")
        if positive and not float(x @ ax) > 0:
            raise SymmetryError(f"{what} is not positive definite")


def minres(apply_A: Operator, apply_Minv: Operator | None, b, rtol: float = 1e-8,
           maxit: int | None = None, seed: int = 0,
           preconditioner: str | None = None) -> tuple[np.ndarray, SolveReport]:
    """MINRES (Lanczos + Givens) for symmetric A with an SPD preconditioner M.

    ``apply_Minv`` applies M^{-1}, or is None for no preconditioning. The
    recorded residual is the preconditioned norm ||r||_{M^{-1}} relative to
    ||b||_{M^{-1}}, which MINRES minimizes and which is therefore
    nonincreasing.
    """
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    maxit = 4 * n if maxit is None else maxit
    rng = np.random.default_rng(seed)
    check_operator(apply_A, n, rng, what="A")
    if apply_Minv is None:
        apply_Minv = lambda v: v  # noqa: E731
        label = preconditioner or "none"
    else:
        check_operator(apply_Minv, n, rng, positive=True, what="preconditioner")
        label = preconditioner or "custom"

    x = np.zeros(n)
    r1 = b.copy()
    y = apply_Minv(r1)
    beta1 = float(r1 @ y)
    if beta1 < 0:
        raise SymmetryError("preconditioner is not positive definite")
    beta1 = math.sqrt(beta1)
    report = SolveReport(n, 0, [], False, label)
    if beta1 == 0.0:
        report.converged = True
        report.true_residual = 0.0
        return x, report

    eps = np.finfo(float).eps
    oldb, beta, dbar, epsln = 0.0, beta1, 0.0, 0.0
    phibar, cs, sn = beta1, -1.0, 0.0
    w = np.zeros(n)
    w2 = np.zeros(n)
    r2 = r1.copy()

    for itn in range(1, maxit + 1):
        v = y / beta
        y = apply_A(v)
        if itn >= 2:
            y = y - (beta / oldb) * r1
        alfa = float(v @ y)
        y = y - (alfa / beta) * r2
        r1, r2 = r2, y
        y = apply_Minv(r2)
        oldb = beta
        beta = float(r2 @ y)
        if beta < 0:
            raise SymmetryError("preconditioner is not positive definite")
        beta = math.sqrt(beta)

        # apply the previous rotation, then build the next one
        oldeps = epsln
        delta = cs * dbar + sn * alfa
        gbar = sn * dbar - cs * alfa
        epsln = sn * beta
        dbar = -cs * beta
        gamma = max(math.hypot(gbar, beta), eps)
        cs, sn = gbar / gamma, beta / gamma
        phi = cs * phibar
        phibar = sn * phibar

        w1, w2 = w2, w
        w = (v - oldeps * w1 - delta * w2) / gamma
        x = x + phi * w

        rel = phibar / beta1
        report.residual_history.append(rel)
        report.iterations = itn
        if rel <= rtol:
            report.converged = True
            break
        if beta <= eps * beta1:
            # invariant Krylov subspace: the iterate is exact in exact arithmetic
            report.converged = True
            report.breakdown = True
            break

    report.true_residual = float(np.linalg.norm(apply_A(x) - b) / np.linalg.norm(b))
    return x, report


def solve_flipped(f: Symbol, b, preconditioner: str = "abs_circulant", rtol: float = 1e-8,
                  maxit: int | None = None, seed: int = 0) -> tuple[np.ndarray, SolveReport]:
    """Solve T_n[f] x = b through the symmetric system Y T x = Y b."""
    b = np.asarray(b, dtype=float)
    n = b.shape[0]
    A = structured.flipped_toeplitz(f, n)
    rhs = b[::-1].copy()
    if preconditioner == "none":
        return minres(lambda v: A @ v, None, rhs, rtol, maxit, seed, "none")
    if preconditioner == "abs_circulant":
        M = abs_circulant(strang_circulant(f, n))
        return minres(lambda v: A @ v, lambda v: apply_inverse(M, v), rhs, rtol, maxit, seed,
                      "abs_circulant")
    raise ValueError(f"unknown preconditioner {preconditioner!r}")


def preconditioned_spectrum(f: Symbol, n: int) -> SpectrumReport:
    """Eigenvalues of M^{-1/2} (Y T) M^{-1/2} with M = |C_n[f]|.

    This matrix is similar to |C_n|^{-1} Y T and, unlike it, symmetric.
    """
    c = strang_circulant(f, n)
    check_nonsingular(c)
    inv_sqrt = CirculantSpec.from_eigenvalues(np.abs(c.eigenvalues) ** -0.5).materialize()
    P = inv_sqrt @ structured.flipped_toeplitz(f, n) @ inv_sqrt
    return sym_eig(0.5 * (P + P.T))
