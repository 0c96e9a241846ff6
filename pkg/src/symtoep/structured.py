"""Dense builders for Toeplitz, flipped Toeplitz and Hankel matrices.

Formulas are written with 1-based indices (j, k = 1..n); arrays are 0-based,
so 1-based (j, k) lives at ``A[j-1, k-1]``.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass

import numpy as np

from .symbol import Symbol


def _require_real(f: Symbol) -> None:
    if not f.is_real:
        raise ValueError(f"symbol {f.name!r} has non-real coefficients")


def _lookup(f: Symbol, lo: int, hi: int) -> np.ndarray:
    """Coefficients a_lo..a_hi as a float array (absent entries are 0)."""
    out = np.zeros(hi - lo + 1)
    for k, v in f.terms:
        if lo <= k <= hi:
            out[k - lo] = v
    return out


def toeplitz(f: Symbol, n: int) -> np.ndarray:
    """T_n[f] with T[j, k] = a_{j-k}."""
    if n < 1:
        raise ValueError("n must be positive")
    _require_real(f)
    a = _lookup(f, -(n - 1), n - 1)
    j = np.arange(n)
    return a[(j[:, None] - j[None, :]) + (n - 1)]


def flip(n: int) -> np.ndarray:
    """The anti-identity Y_n."""
    if n < 1:
        raise ValueError("n must be positive")
    return np.eye(n)[::-1].copy()


def flipped_toeplitz(f: Symbol, n: int) -> np.ndarray:
    """Y_n T_n[f], built directly from (Y T)[j, k] = a_{n+1-j-k}."""
    if n < 1:
        raise ValueError("n must be positive")
    _require_real(f)
    a = _lookup(f, -(n - 1), n - 1)
    j = np.arange(1, n + 1)
    return a[(n + 1 - j[:, None] - j[None, :]) + (n - 1)]


def hankel_block(f: Symbol, nu: int, sign: str) -> np.ndarray:
    """H_nu[f, +] (a_1 .. a_{2nu-1}) or H_nu[f, -] (a_{-1} .. a_{-2nu+1})."""
    if nu < 1:
        raise ValueError("nu must be positive")
    _require_real(f)
    j = np.arange(1, nu + 1)
    idx = j[:, None] + j[None, :] - 1
    if sign == "plus":
        return _lookup(f, 0, 2 * nu)[idx]
    if sign == "minus":
        return _lookup(f.reversed(), 0, 2 * nu)[idx]
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


@dataclass(frozen=True)
class BlockDecomposition:
    """Y_n T_n[f] split into a small-rank-ish remainder and an anti-diagonal core.

    For odd n the remainder is ``e_prime + e_double_prime``; for even n those
    two fields are the remainder and a zero matrix.
    """

    parity: str
    nu: int
    remainder: np.ndarray
    core: np.ndarray
    e_prime: np.ndarray
    e_double_prime: np.ndarray

    @property
    def n(self) -> int:
        return self.core.shape[0]

    def reconstruct(self) -> np.ndarray:
        return self.remainder + self.core


def _blockdiag(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0],) * 2)
    out[: a.shape[0], : a.shape[0]] = a
    out[a.shape[0]:, a.shape[0]:] = b
    return out


def block_decompose(f: Symbol, n: int) -> BlockDecomposition:
    if n < 2:
        raise ValueError("block decomposition needs n >= 2")
    nu = n // 2
    YT = flipped_toeplitz(f, nu)
    core = np.zeros((n, n))
    core[:nu, n - nu:] = YT
    core[n - nu:, :nu] = YT

    if n % 2 == 0:
        # Y H Y is a reversal of both axes; slicing keeps it a pure copy
        remainder = _blockdiag(hankel_block(f, nu, "plus")[::-1, ::-1],
                               hankel_block(f, nu, "minus"))
        return BlockDecomposition("even", nu, remainder, core, remainder, np.zeros((n, n)))

    mu = nu + 1
    g = f.shifted(1)  # f * e^{i theta}
    e1 = _blockdiag(hankel_block(g, mu, "plus")[::-1, ::-1], hankel_block(g, nu, "minus"))
    # coupling of the centre row/column to the bottom block: w_p = a_{-p}
    w = _lookup(f.reversed(), 1, nu)
    e2 = np.zeros((n, n))
    e2[nu, mu:] = w
    e2[mu:, nu] = w
    return BlockDecomposition("odd", nu, e1 + e2, core, e1, e2)


# -- dumps -----------------------------------------------------------------

def matrix_to_csv(A: np.ndarray) -> str:
    buf = io.StringIO()
    for row in np.atleast_2d(A):
        buf.write(",".join(repr(float(x)) for x in row))
        buf.write("\n")
    return buf.getvalue()


def matrix_to_json(A: np.ndarray) -> str:
    A = np.atleast_2d(A)
    return json.dumps({"n_rows": A.shape[0], "n_cols": A.shape[1],
                       "entries": [float(x) for x in A.ravel()]})


def matrix_from_json(text: str) -> np.ndarray:
    d = json.loads(text)
    entries = np.asarray(d["entries"], dtype=float)
    if entries.size != d["n_rows"] * d["n_cols"]:
        raise ValueError("entries length does not match n_rows * n_cols")
    if not np.all(np.isfinite(entries)):
        raise ValueError("matrix entries must be finite")
    return entries.reshape(d["n_rows"], d["n_cols"])
