"""Circulant algebra through the DFT.

Convention: omega = exp(-2 pi i / n) and a circulant with first column c has
eigenvalues lambda_j = sum_k c_k omega^{jk}, i.e. the forward DFT of c.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .structured import flip
from .symbol import Symbol


def _twiddles(n: int) -> np.ndarray:
    k = np.arange(n // 2)
    ang = 2 * np.pi * k / n
    return np.cos(ang) - 1j * np.sin(ang)


def _fft_radix2(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    if n == 1:
        return x.copy()
    even = _fft_radix2(x[0::2])
    odd = _fft_radix2(x[1::2]) * _twiddles(n)
    return np.concatenate([even + odd, even - odd])


def _dft_direct(x: np.ndarray) -> np.ndarray:
    n = x.shape[0]
    j = np.arange(n)
    # reduce jk mod n before scaling so large exponents stay accurate
    ang = 2 * np.pi * ((j[:, None] * j[None, :]) % n) / n
    return (np.cos(ang) - 1j * np.sin(ang)) @ x


def dft(x, direction: str = "forward") -> np.ndarray:
    """DFT with omega = exp(-2 pi i / n); ``inverse`` includes the 1/n factor.

    Power-of-two lengths use a recursive radix-2 split, others direct summation.
    """
    x = np.asarray(x, dtype=complex)
    if x.ndim != 1 or x.shape[0] < 1:
        raise ValueError("dft expects a non-empty 1-D vector")
    if direction == "inverse":
        return np.conj(dft(np.conj(x), "forward")) / x.shape[0]
    if direction != "forward":
        raise ValueError(f"direction must be 'forward' or 'inverse', got {direction!r}")
    n = x.shape[0]
    if n & (n - 1) == 0:
        return _fft_radix2(x)
    return _dft_direct(x)


def _real_part(z: np.ndarray, scale: float, what: str) -> np.ndarray:
    tol = 1e-12 * scale
    worst = float(np.max(np.abs(z.imag), initial=0.0))
    if worst > tol:
        raise ValueError(f"{what} has imaginary residue {worst:.3g} > {tol:.3g}")
    return z.real.copy()


@dataclass(frozen=True, eq=False)
class CirculantSpec:
    """Real circulant matrix held as its first column with cached eigenvalues."""

    first_column: np.ndarray
    eigenvalues: np.ndarray

    def __init__(self, first_column):
        col = np.array(first_column, dtype=float)
        if col.ndim != 1 or col.shape[0] < 1:
            raise ValueError("first_column must be a non-empty vector")
        if not np.all(np.isfinite(col)):
            raise ValueError("first_column must be finite")
        eig = dft(col)
        col.flags.writeable = False
        eig.flags.writeable = False
        object.__setattr__(self, "first_column", col)
        object.__setattr__(self, "eigenvalues", eig)

    @classmethod
    def from_eigenvalues(cls, eigenvalues) -> "CirculantSpec":
        """Circulant with the given spectrum; it must correspond to a real matrix."""
        lam = np.asarray(eigenvalues, dtype=complex)
        scale = float(np.max(np.abs(lam), initial=0.0))
        col = _real_part(dft(lam, "inverse"), scale, "inverse DFT of eigenvalues")
        return cls(col)

    @property
    def n(self) -> int:
        return self.first_column.shape[0]

    def materialize(self) -> np.ndarray:
        """Dense matrix C[j, k] = c_{(j-k) mod n}, by rotating the first column."""
        n = self.n
        j = np.arange(n)
        return self.first_column[(j[:, None] - j[None, :]) % n]

    def matvec(self, x) -> np.ndarray:
        return self.materialize() @ np.asarray(x, dtype=float)


def strang_circulant(p: Symbol, n: int) -> CirculantSpec:
    """C_n[p] = sum_k rho_k Pi_n^k, coefficient rho_k placed at index k mod n."""
    if not p.is_real:
        raise ValueError(f"symbol {p.name!r} has non-real coefficients")
    if n <= 2 * p.degree:
        raise ValueError(f"strang circulant needs n > 2*degree = {2 * p.degree}, got n={n}")
    col = np.zeros(n)
    for k, v in p.terms:
        col[k % n] = v
    return CirculantSpec(col)


def abs_circulant(c: CirculantSpec) -> CirculantSpec:
    """|C| = F |Lambda| F^*, the symmetric positive semidefinite polar factor."""
    return CirculantSpec.from_eigenvalues(np.abs(c.eigenvalues))


def _check_real_spectrum(c: CirculantSpec) -> np.ndarray:
    lam = c.eigenvalues
    scale = float(np.max(np.abs(lam), initial=0.0))
    worst = float(np.max(np.abs(lam.imag), initial=0.0))
    if worst > 1e-12 * scale:
        raise ValueError(f"circulant has complex eigenvalues (max |Im| = {worst:.3g}); "
                         "use phase_circulant")
    return lam.real


def sign_circulant(c: CirculantSpec) -> CirculantSpec:
    """Replace each (real) eigenvalue by its sign, with sign(0) := +1."""
    lam = _check_real_spectrum(c)
    return CirculantSpec.from_eigenvalues(np.where(lam < 0, -1.0, 1.0))


def _zero_threshold(lam: np.ndarray) -> float:
    return 1e-12 * float(np.max(np.abs(lam), initial=0.0))


def phase_circulant(c: CirculantSpec) -> CirculantSpec:
    """Replace each eigenvalue by lambda/|lambda| (+1 where lambda vanishes).

    Coincides with :func:`sign_circulant` for real spectra. Eigenvalues of a
    real circulant come in conjugate pairs, so the result is again real.
    """
    lam = c.eigenvalues
    mag = np.abs(lam)
    small = mag <= _zero_threshold(lam)
    phase = np.where(small, 1.0 + 0j, lam / np.where(small, 1.0, mag))
    return CirculantSpec.from_eigenvalues(phase)


def factorize_flip_circulant(p: Symbol, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Split Y_n C_n[p] = Q A with Q symmetric orthogonal and A = |C_n[p]|."""
    c = strang_circulant(p, n)
    Q = flip(n) @ phase_circulant(c).materialize()
    A = abs_circulant(c).materialize()
    return Q, A


class SingularCirculantError(ValueError):
    def __init__(self, min_abs: float, max_abs: float):
        super().__init__(f"circulant is numerically singular: min|lambda| = {min_abs:.3g}, "
                         f"max|lambda| = {max_abs:.3g}")
        self.min_abs = min_abs
        self.max_abs = max_abs


def check_nonsingular(c: CirculantSpec) -> None:
    mag = np.abs(c.eigenvalues)
    lo, hi = float(mag.min()), float(mag.max())
    if not lo > 1e-12 * hi:
        raise SingularCirculantError(lo, hi)


def apply_inverse(c: CirculantSpec, x) -> np.ndarray:
    """Solve C y = x via y = IDFT(DFT(x) / lambda)."""
    check_nonsingular(c)
    x = np.asarray(x, dtype=float)
    y = dft(dft(x) / c.eigenvalues, "inverse")
    worst = float(np.max(np.abs(y.imag), initial=0.0))
    if worst > 1e-10 * float(np.linalg.norm(x)):
        raise ValueError(f"circulant solve left imaginary residue {worst:.3g}")
    return y.real
