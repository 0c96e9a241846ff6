"""Dense symmetric eigenvalues, singular values and inertia.

Eigenvalues come from a Householder reduction to tridiagonal form followed by
the implicit QL iteration with Wilkinson shifts. Eigenvectors are never
formed.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

EPS = float(np.finfo(float).eps)
MAX_QL_ITERATIONS = 50
INERTIA_TOL_FACTOR = 64


class ConvergenceError(ArithmeticError):
    pass


def tridiagonalize(A) -> tuple[np.ndarray, np.ndarray]:
    """Householder reduction of a symmetric matrix.

    Returns the diagonal ``d`` (length n) and off-diagonal ``e`` (length n-1)
    of a tridiagonal matrix orthogonally similar to ``A``. Only the lower
    triangle of ``A`` is trusted.
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    e = np.zeros(max(n - 1, 0))
    for k in range(n - 2):
        x = a[k + 1:, k]
        tail = float(x[1:] @ x[1:])
        xnorm = math.sqrt(float(x[0]) ** 2 + tail)
        if tail <= (EPS * xnorm) ** 2:
            # column already tridiagonal below the subdiagonal
            e[k] = x[0]
            continue
        alpha = -math.copysign(xnorm, x[0])
        u = x.copy()
        u[0] -= alpha
        u /= math.sqrt(float(u @ u))
        sub = a[k + 1:, k + 1:]
        p = sub @ u
        q = p - (u @ p) * u
        sub -= 2.0 * (np.outer(u, q) + np.outer(q, u))
        e[k] = alpha
    if n >= 2:
        e[n - 2] = a[n - 1, n - 2]
    return np.diag(a).copy(), e


def tridiagonal_eigenvalues(d, e) -> np.ndarray:
    """Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.

    Raises :class:`ConvergenceError` if any eigenvalue needs more than
    ``MAX_QL_ITERATIONS`` sweeps.
    """
    d = [float(x) for x in d]
    n = len(d)
    e = [float(x) for x in e] + [0.0]
    for l in range(n):
        iters = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= EPS * dd:
                    break
                m += 1
            if m == l:
                break
            iters += 1
            if iters > MAX_QL_ITERATIONS:
                raise ConvergenceError(f"QL iteration did not converge for eigenvalue {l}")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            i = m - 1
            while i >= l:
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # underflow: deflate and restart this eigenvalue
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                i -= 1
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    return np.sort(np.array(d))


@dataclass(frozen=True)
class SpectrumReport:
    n: int
    kind: str  # "eigenvalues" or "singular_values"
    values: np.ndarray
    inertia: tuple[int, int, int]
    zero_tol: float

    def to_dict(self) -> dict:
        plus, minus, zero = self.inertia
        return {"n": self.n, "kind": self.kind,
                "values": [float(v) for v in self.values],
                "inertia": {"plus": plus, "minus": minus, "zero": zero},
                "zero_tol": self.zero_tol}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def to_csv(self) -> str:
        buf = io.StringIO()
        for v in self.values:
            buf.write(f"{float(v)!r}\n")
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumReport":
        i = d["inertia"]
        return cls(d["n"], d["kind"], np.asarray(d["values"], dtype=float),
                   (i["plus"], i["minus"], i["zero"]), d["zero_tol"])


def auto_zero_tol(values) -> float:
    values = np.asarray(values)
    scale = float(np.max(np.abs(values), initial=0.0))
    return INERTIA_TOL_FACTOR * len(values) * EPS * scale


def _count(values: np.ndarray, tol: float) -> tuple[int, int, int]:
    plus = int(np.sum(values > tol))
    minus = int(np.sum(values < -tol))
    return plus, minus, len(values) - plus - minus


def _make_report(kind: str, values: np.ndarray) -> SpectrumReport:
    tol = auto_zero_tol(values)
    return SpectrumReport(len(values), kind, values, _count(values, tol), tol)


def check_symmetric(A: np.ndarray, rtol: float = 1e-12) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    scale = float(np.max(np.abs(A), initial=0.0))
    asym = float(np.max(np.abs(A - A.T), initial=0.0))
    if asym > rtol * scale:
        raise ValueError(f"matrix is not symmetric: max|A - A^T| = {asym:.3g}")


def sym_eig(A) -> SpectrumReport:
    """Eigenvalues of a real symmetric matrix, ascending."""
    A = np.asarray(A, dtype=float)
    check_symmetric(A)
    if A.shape[0] == 0:
        return _make_report("eigenvalues", np.zeros(0))
    d, e = tridiagonalize(A)
    return _make_report("eigenvalues", tridiagonal_eigenvalues(d, e))


def singular_values(A) -> SpectrumReport:
    """Singular values of a square matrix, ascending.

    They are read off the symmetric embedding [[0, A], [A^T, 0]], whose
    eigenvalues are +-sigma_j; unlike A^T A this keeps small singular values
    at full relative accuracy of the eigensolver.
    """
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {A.shape}")
    n = A.shape[0]
    J = np.zeros((2 * n, 2 * n))
    J[n:, :n] = A.T
    J[:n, n:] = A
    lam = sym_eig(J).values
    sigma = np.sort(np.abs(lam[n:]))
    return _make_report("singular_values", sigma)


def inertia(report: SpectrumReport, zero_tol: float | str = "auto") -> tuple[int, int, int]:
    """(n_plus, n_minus, n_zero) relative to a zero band of half-width zero_tol."""
    if report.kind != "eigenvalues":
        raise ValueError("inertia needs an eigenvalue report")
    tol = auto_zero_tol(report.values) if zero_tol == "auto" else float(zero_tol)
    return _count(report.values, tol)


def numerical_rank(A, rtol: float | None = None) -> int:
    """Number of singular values above n * eps * sigma_max (or rtol * sigma_max)."""
    sigma = singular_values(A).values
    if sigma.size == 0 or sigma[-1] == 0.0:
        return 0
    if rtol is None:
        rtol = sigma.size * EPS
    return int(np.sum(sigma > rtol * sigma[-1]))
