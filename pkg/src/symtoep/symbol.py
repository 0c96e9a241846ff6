"""Generating functions stored as finite Fourier coefficient maps.

A :class:`Symbol` represents the trigonometric polynomial

    f(theta) = sum_k a_k exp(i k theta)

and the Toeplitz matrix it generates has entries ``T[j, k] = a_{j-k}``
(so ``a_1`` sits on the first subdiagonal).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

DEFAULT_QUAD_POINTS = 2**14
QUAD_POINTS_ENV = "TSL_QUAD_POINTS"

BUILTIN_SYMBOLS: dict[str, dict[int, float]] = {
    # 2 + e^{i theta}: lower bidiagonal, 2 on the diagonal
    "bidiagonal": {0: 2.0, 1: 1.0},
    # -1 below the diagonal, 1 on the diagonal and three superdiagonals
    "grcar": {1: -1.0, 0: 1.0, -1: 1.0, -2: 1.0, -3: 1.0},
    # e^{-3i} - 4e^{-2i} + 6e^{-i} - 4 + e^{i}
    "fourth_diff": {1: 1.0, 0: -4.0, -1: 6.0, -2: -4.0, -3: 1.0},
    # 1 + 6 cos(theta)
    "cosine6": {-1: 3.0, 0: 1.0, 1: 3.0},
}


def _normalize(coeffs: Mapping[int, complex]) -> tuple[tuple[int, complex], ...]:
    terms = []
    for k, v in coeffs.items():
        if int(k) != k:
            raise ValueError(f"coefficient index {k!r} is not an integer")
        v = complex(v)
        if not (math.isfinite(v.real) and math.isfinite(v.imag)):
            raise ValueError(f"coefficient a_{k} = {v} is not finite")
        if v == 0:
            continue
        terms.append((int(k), v.real if v.imag == 0 else v))
    terms.sort()
    for (k0, _), (k1, _) in zip(terms, terms[1:]):
        if k0 == k1:
            raise ValueError(f"duplicate coefficient index {k0}")
    return tuple(terms)


@dataclass(frozen=True)
class Symbol:
    """Immutable trigonometric polynomial given by its Fourier coefficients.

    ``Symbol({0: 2, 1: 1})`` is ``2 + exp(i theta)``. Zero coefficients are
    dropped; real coefficients are stored as floats.
    """

    terms: tuple[tuple[int, complex], ...]
    label: str | None = field(default=None, compare=False)

    def __init__(self, coeffs: Mapping[int, complex] | Sequence[tuple[int, complex]] = (),
                 label: str | None = None):
        if not isinstance(coeffs, Mapping):
            coeffs = dict(coeffs)
        object.__setattr__(self, "terms", _normalize(coeffs))
        object.__setattr__(self, "label", label)

    @property
    def coeffs(self) -> dict[int, complex]:
        return dict(self.terms)

    def __getitem__(self, k: int) -> complex:
        for j, v in self.terms:
            if j == k:
                return v
        return 0.0

    @property
    def degree(self) -> int:
        """Largest |k| in the support (0 for constants and the zero symbol)."""
        return max((abs(k) for k, _ in self.terms), default=0)

    @property
    def is_real(self) -> bool:
        return all(isinstance(v, float) for _, v in self.terms)

    @property
    def is_even(self) -> bool:
        """True when a_k == a_{-k}, i.e. f is real-valued and even."""
        c = self.coeffs
        return self.is_real and all(c.get(-k, 0.0) == v for k, v in c.items())

    @property
    def l1_norm(self) -> float:
        """sum |a_k|, an upper bound for max |f|."""
        return float(sum(abs(v) for _, v in self.terms))

    @property
    def name(self) -> str:
        if self.label:
            return self.label
        return format_symbol(self).replace("\n", ",") or "0"

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        out = np.zeros(theta.shape, dtype=complex)
        for k, v in self.terms:
            out += v * np.exp(1j * k * theta)
        return out

    def shifted(self, s: int) -> "Symbol":
        return Symbol({k + s: v for k, v in self.terms}, label=self.label)

    def reversed(self) -> "Symbol":
        """k -> -k; for real coefficients this is the conjugate symbol."""
        return Symbol({-k: v for k, v in self.terms}, label=self.label)


def builtin_symbol(name: str) -> Symbol:
    try:
        coeffs = BUILTIN_SYMBOLS[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_SYMBOLS))
        raise ValueError(f"unknown builtin symbol {name!r} (known: {known})") from None
    return Symbol(coeffs, label=name)


def shift(f: Symbol, s: int) -> Symbol:
    """Multiply by exp(i s theta): the result has g_k = a_{k-s}."""
    return f.shifted(s)


# -- text format -----------------------------------------------------------

def parse_symbol(text: str, label: str | None = None) -> Symbol:
    """Parse lines of ``k=value``. Blank lines and ``#`` comments are skipped."""
    coeffs: dict[int, complex] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'k=value', got {raw!r}")
        k_str, v_str = (s.strip() for s in line.split("=", 1))
        try:
            k = int(k_str)
        except ValueError:
            raise ValueError(f"line {lineno}: bad index {k_str!r}") from None
        try:
            v: complex = float(v_str)
        except ValueError:
            try:
                v = complex(v_str.replace(" ", ""))
            except ValueError:
                raise ValueError(f"line {lineno}: bad value {v_str!r}") from None
        if k in coeffs:
            raise ValueError(f"line {lineno}: index {k} given twice")
        coeffs[k] = v
    return Symbol(coeffs, label=label)


def format_symbol(f: Symbol) -> str:
    return "\n".join(f"{k}={v!r}" for k, v in f.terms)


def load_symbol(spec: str) -> Symbol:
    """Resolve a builtin name, falling back to a path in the text format."""
    if spec in BUILTIN_SYMBOLS:
        return builtin_symbol(spec)
    path = Path(spec)
    if not path.is_file():
        known = ", ".join(sorted(BUILTIN_SYMBOLS))
        raise ValueError(f"{spec!r} is neither a builtin symbol ({known}) nor a file")
    return parse_symbol(path.read_text(), label=path.stem)


# -- sampling and quadrature ---------------------------------------------

@dataclass(frozen=True)
class GridSamples:
    n_points: int
    thetas: np.ndarray
    values: np.ndarray


def grid(n_points: int) -> np.ndarray:
    return -np.pi + 2 * np.pi * np.arange(n_points) / n_points


def sample(f: Symbol, n_points: int) -> GridSamples:
    if n_points < 1:
        raise ValueError("n_points must be positive")
    thetas = grid(n_points)
    return GridSamples(n_points, thetas, f(thetas))


def default_quad_points() -> int:
    env = os.environ.get(QUAD_POINTS_ENV)
    if env:
        n = int(env)
        if n < 1:
            raise ValueError(f"{QUAD_POINTS_ENV} must be positive, got {env}")
        return n
    return DEFAULT_QUAD_POINTS


def real_values(f: Symbol, samples: GridSamples) -> np.ndarray:
    """Sample values as reals, refusing a materially complex-valued symbol."""
    tol = 1e-12 * max(f.l1_norm, np.finfo(float).tiny)
    worst = float(np.max(np.abs(samples.values.imag), initial=0.0))
    if worst > tol:
        raise ValueError(f"symbol {f.name!r} is complex-valued on the grid "
                         f"(max |Im f| = {worst:.3g})")
    return samples.values.real


def integrate_test_function(f: Symbol, F: Callable[[np.ndarray], np.ndarray],
                            mode: str = "abs", n_points: int | None = None) -> float:
    """Trapezoid approximation of (1/2pi) * integral of F(|f|) (or F(f)).

    On a uniform periodic grid the composite trapezoid rule is the plain mean
    of the samples.
    """
    if n_points is None:
        n_points = default_quad_points()
    s = sample(f, n_points)
    if mode == "abs":
        x = np.abs(s.values)
    elif mode == "raw":
        x = real_values(f, s)
    else:
        raise ValueError(f"mode must be 'abs' or 'raw', got {mode!r}")
    return float(np.mean(F(x)))


# -- test-function dictionary ---------------------------------------------

@dataclass(frozen=True)
class TestFunction:
    """A compactly supported test function with a stable identifier."""

    __test__ = False  # not a pytest class

    id: str
    fn: Callable[[np.ndarray], np.ndarray] = field(compare=False, repr=False)

    def __call__(self, x):
        return self.fn(np.asarray(x, dtype=float))


def _hat(center: float, width: float):
    return lambda x: np.maximum(0.0, 1.0 - np.abs(x - center) / width)


def _taper(g, lo: float, hi: float):
    # g on [lo, hi], linear ramps to zero over one unit on each side
    def fn(x):
        inside = g(np.clip(x, lo, hi))
        ramp = np.clip(np.minimum(x - (lo - 1.0), (hi + 1.0) - x), 0.0, 1.0)
        return np.where((x >= lo) & (x <= hi), g(x), inside * ramp)
    return fn


def test_functions(radius: float, n_hats: int = 16) -> list[TestFunction]:
    """Hats on a uniform partition of [-radius, radius] plus tapered x and x^2.

    ``radius`` should bound |f|; ``Symbol.l1_norm`` does.
    """
    if n_hats < 1:
        raise ValueError("n_hats must be positive")
    r = max(float(radius), 1.0)
    nodes = np.linspace(-r, r, n_hats + 1)
    width = nodes[1] - nodes[0]
    funcs = [TestFunction(f"hat_{i}", _hat(float(c), width)) for i, c in enumerate(nodes)]
    funcs.append(TestFunction("x", _taper(lambda x: x, -r - 1.0, r + 1.0)))
    funcs.append(TestFunction("x2", _taper(lambda x: x * x, -r - 1.0, r + 1.0)))
    return funcs


test_functions.__test__ = False
