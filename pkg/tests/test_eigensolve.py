import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symtoep import eigensolve
from symtoep.circulant import sign_circulant, strang_circulant
from symtoep.eigensolve import (
    ConvergenceError, SpectrumReport, inertia, numerical_rank, singular_values, sym_eig,
    tridiagonalize,
)
from symtoep.structured import flip, flipped_toeplitz, toeplitz
from symtoep.symbol import builtin_symbol

N6_VALUES = [-4.740938811152401, -2.740938811152402, 0.335125603737888,
            2.335125603737888, 4.405813207414513, 6.405813207414515]


def eig2(a, b, c):
    """Closed form for [[a, b], [b, c]]."""
    m, d = (a + c) / 2, math.hypot((a - c) / 2, b)
    return [m - d, m + d]


def eig3(A):
    """Trigonometric closed form for a symmetric 3x3 matrix."""
    p1 = A[0, 1] ** 2 + A[0, 2] ** 2 + A[1, 2] ** 2
    q = np.trace(A) / 3
    if p1 == 0:
        return sorted(np.diag(A))
    p2 = sum((A[i, i] - q) ** 2 for i in range(3)) + 2 * p1
    p = math.sqrt(p2 / 6)
    r = np.linalg.det((A - q * np.eye(3)) / p) / 2
    phi = math.acos(min(1.0, max(-1.0, r))) / 3
    e1 = q + 2 * p * math.cos(phi)
    e3 = q + 2 * p * math.cos(phi + 2 * math.pi / 3)
    return sorted([e1, 3 * q - e1 - e3, e3])


def random_symmetric(rng, n):
    A = rng.standard_normal((n, n))
    return A + A.T


def test_two_by_two_example():
    lam = sym_eig([[1, 2], [2, 0]]).values
    np.testing.assert_allclose(lam, [(1 - math.sqrt(17)) / 2, (1 + math.sqrt(17)) / 2],
                               rtol=1e-15)


def test_cosine6_n6_values():
    lam = sym_eig(flipped_toeplitz(builtin_symbol("cosine6"), 6)).values
    np.testing.assert_allclose(lam, N6_VALUES, atol=1e-9, rtol=0)


@pytest.mark.parametrize("c", [-3.0, 0.0, 2.5])
def test_scalar_matrix(c):
    np.testing.assert_array_equal(sym_eig(c * np.eye(7)).values, c)


def test_closed_forms(rng):
    for _ in range(200):
        a, b, c = rng.standard_normal(3)
        np.testing.assert_allclose(sym_eig([[a, b], [b, c]]).values, eig2(a, b, c),
                                   atol=1e-12)
        A = random_symmetric(rng, 3)
        np.testing.assert_allclose(sym_eig(A).values, eig3(A), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 5, 17, 64, 130])
def test_against_lapack(rng, n):
    A = random_symmetric(rng, n)
    np.testing.assert_allclose(sym_eig(A).values, np.linalg.eigvalsh(A),
                               atol=n * 1e-14 * np.abs(A).max())


def test_trace_and_frobenius(rng):
    for _ in range(20):
        n = int(rng.integers(1, 65))
        A = random_symmetric(rng, n)
        lam = sym_eig(A).values
        tol = 1e-8 * n * np.abs(A).max()
        assert abs(lam.sum() - np.trace(A)) <= tol
        assert abs((lam**2).sum() - (A**2).sum()) <= tol * np.abs(A).max()


def test_tridiagonalize_preserves_spectrum(rng):
    A = random_symmetric(rng, 20)
    d, e = tridiagonalize(A)
    T = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
    np.testing.assert_allclose(np.linalg.eigvalsh(T), np.linalg.eigvalsh(A), atol=1e-12)


def test_orthogonal_similarity_invariance(builtin, rng):
    c = strang_circulant(builtin_symbol("cosine6"), 16)
    Q = flip(16) @ sign_circulant(c).materialize()
    A = flipped_toeplitz(builtin, 16)
    B = Q.T @ A @ Q
    np.testing.assert_allclose(sym_eig(0.5 * (B + B.T)).values, sym_eig(A).values, atol=1e-8)


def test_structured_spectra_with_clusters():
    # repeated and zero eigenvalues stress deflation
    for n in (8, 31, 64):
        for f in ("fourth_diff", "grcar"):
            A = flipped_toeplitz(builtin_symbol(f), n)
            np.testing.assert_allclose(sym_eig(A).values, np.linalg.eigvalsh(A), atol=1e-11)
        Z = np.zeros((n, n))
        Z[0, -1] = Z[-1, 0] = 1.0
        np.testing.assert_allclose(sym_eig(Z).values, np.linalg.eigvalsh(Z), atol=1e-15)


def test_rejects_non_symmetric():
    with pytest.raises(ValueError, match="not symmetric"):
        sym_eig([[1, 2], [0, 1]])
    with pytest.raises(ValueError, match="square"):
        sym_eig(np.ones((2, 3)))


def test_non_convergence_raises(monkeypatch):
    monkeypatch.setattr(eigensolve, "MAX_QL_ITERATIONS", 0)
    with pytest.raises(ConvergenceError):
        sym_eig([[1.0, 2.0], [2.0, 0.0]])


def test_singular_values_examples(rng):
    np.testing.assert_allclose(singular_values(np.diag([1.0, -2.0, 3.0])).values, [1, 2, 3],
                               atol=1e-15)
    for n in (2, 9, 32):
        A = rng.standard_normal((n, n))
        s = singular_values(A)
        assert s.kind == "singular_values" and np.all(s.values >= 0)
        np.testing.assert_allclose(s.values, np.sort(np.linalg.svd(A, compute_uv=False)),
                                   atol=1e-12 * n)
        np.testing.assert_allclose(singular_values(flip(n) @ A).values, s.values, atol=1e-8)


def test_singular_values_of_symmetric_are_abs_eigenvalues(builtin):
    for n in (5, 20):
        M = flipped_toeplitz(builtin, n)
        np.testing.assert_allclose(singular_values(M).values,
                                   np.sort(np.abs(sym_eig(M).values)), atol=1e-8)


def test_small_singular_values_keep_relative_accuracy():
    # rank one: the embedding returns exact zeros where A^T A would leave sqrt(eps)
    A = np.zeros((6, 6))
    A[0, 0] = 1.0
    assert numerical_rank(A) == 1
    assert numerical_rank(np.zeros((4, 4))) == 0


@pytest.mark.parametrize("name, n, expected", [
    ("bidiagonal", 100, (50, 50, 0)), ("bidiagonal", 200, (100, 100, 0)),
    ("grcar", 100, (50, 50, 0)), ("grcar", 200, (100, 100, 0)),
    ("fourth_diff", 100, (50, 50, 0)), ("fourth_diff", 200, (100, 100, 0)),
])
def test_table1_inertia(name, n, expected):
    assert sym_eig(flipped_toeplitz(builtin_symbol(name), n)).inertia == expected


@pytest.mark.parametrize("n", [6, 100, 200])
def test_cosine6_excess(n):
    plus, minus, zero = sym_eig(flipped_toeplitz(builtin_symbol("cosine6"), n)).inertia
    assert plus - minus == 2 and zero == 0


def test_inertia_tolerances():
    r = sym_eig(np.diag([-1.0, 0.0, 1e-20, 2.0]))
    assert r.inertia == (1, 1, 2)
    assert r.zero_tol == pytest.approx(64 * 4 * np.finfo(float).eps * 2.0)
    assert inertia(r, 0.0) == (2, 1, 1)
    assert inertia(r, 1.5) == (1, 0, 3)
    with pytest.raises(ValueError):
        inertia(singular_values(np.eye(2)))


def test_report_serialization():
    r = sym_eig(flipped_toeplitz(builtin_symbol("cosine6"), 6))
    d = r.to_dict()
    assert d["inertia"] == {"plus": 4, "minus": 2, "zero": 0}
    back = SpectrumReport.from_dict(d)
    np.testing.assert_array_equal(back.values, r.values)
    assert len(r.to_csv().splitlines()) == 6
    assert sum(r.inertia) == r.n == 6


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 30).flatmap(
    lambda n: st.lists(st.integers(-20, 20), min_size=n * n, max_size=n * n)))
def test_random_integer_matrices(entries):
    n = math.isqrt(len(entries))
    A = np.array(entries, dtype=float).reshape(n, n)
    A = A + A.T
    np.testing.assert_allclose(sym_eig(A).values, np.linalg.eigvalsh(A),
                               atol=1e-12 * n * max(np.abs(A).max(), 1))
