"""Acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible in normal pytest
output) and then asserts.
"""

import time

import numpy as np
import pytest

from symtoep.circulant import factorize_flip_circulant, strang_circulant
from symtoep.eigensolve import numerical_rank, singular_values, sym_eig
from symtoep.krylov import preconditioned_spectrum, solve_flipped
from symtoep.spectral import cluster_measure, distribution_check
from symtoep.structured import block_decompose, flip, flipped_toeplitz, hankel_block, toeplitz
from symtoep.symbol import BUILTIN_SYMBOLS, builtin_symbol

BUILTINS = sorted(BUILTIN_SYMBOLS)

N6_VALUES = [-4.740938811152401, -2.740938811152402, 0.335125603737888,
             2.335125603737888, 4.405813207414513, 6.405813207414515]


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number:2d}: {detail}")
        assert ok, detail
    return emit


def test_c01_n6_eigenvalues(report):
    t0 = time.perf_counter()
    lam = sym_eig(flipped_toeplitz(builtin_symbol("cosine6"), 6)).values
    dt = time.perf_counter() - t0
    err = float(np.max(np.abs(lam - N6_VALUES)))
    report(1, err <= 1e-9 and dt < 1.0, f"n=6 eigenvalues max err {err:.2e}, {dt:.3f}s")


def test_c02_inertia_table(report):
    t0 = time.perf_counter()
    got = {(name, n): sym_eig(flipped_toeplitz(builtin_symbol(name), n)).inertia
           for name in ("bidiagonal", "grcar", "fourth_diff") for n in (100, 200)}
    dt = time.perf_counter() - t0
    ok = all(v == (n // 2, n // 2, 0) for (_, n), v in got.items()) and dt < 30
    report(2, ok, f"inertia {sorted(set(got.values()))} in {dt:.1f}s")


def test_c03_cosine6_excess(report):
    diffs = {}
    for n in (6, 100, 200):
        plus, minus, _ = sym_eig(flipped_toeplitz(builtin_symbol("cosine6"), n)).inertia
        diffs[n] = plus - minus
    report(3, all(d == 2 for d in diffs.values()), f"n+ - n- = {diffs}")


def test_c04_flip_circulant_factorization(report):
    worst = {"multiset": 0.0, "QA-YC": 0.0, "QA-AQ": 0.0, "QtQ-I": 0.0}
    for name in BUILTINS:
        p = builtin_symbol(name)
        for n in (8, 16, 32):
            C = strang_circulant(p, n).materialize()
            YC = flip(n) @ C
            lam = np.sort(np.abs(sym_eig(YC).values))
            sig = singular_values(C).values
            Q, A = factorize_flip_circulant(p, n)
            for key, val in (("multiset", np.abs(lam - sig)), ("QA-YC", np.abs(Q @ A - YC)),
                             ("QA-AQ", np.abs(Q @ A - A @ Q)),
                             ("QtQ-I", np.abs(Q.T @ Q - np.eye(n)))):
                worst[key] = max(worst[key], float(val.max()))
    ok = worst["multiset"] <= 1e-8 and all(worst[k] <= 1e-10 for k in worst if k != "multiset")
    report(4, ok, "max errors " + ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def test_c05_rank_split(report):
    bad = []
    for name in BUILTINS:
        p = builtin_symbol(name)
        for n in (16, 32, 64):
            R = toeplitz(p, n) - strang_circulant(p, n).materialize()
            r, rf = numerical_rank(R), numerical_rank(flip(n) @ R)
            if r > 2 * p.degree or rf != r:
                bad.append((name, n, r, rf))
    report(5, not bad, f"rank(T - C) <= 2*degree, flipped equal; violations {bad}")


def test_c06_block_decomposition(report):
    inexact, even_err, odd_bad = [], 0.0, []
    for name in BUILTINS:
        f = builtin_symbol(name)
        for n in range(2, 65):
            d = block_decompose(f, n)
            if not np.array_equal(d.remainder + d.core, flipped_toeplitz(f, n)):
                inexact.append((name, n))
            lam = sym_eig(d.core).values
            if n % 2 == 0:
                sig = singular_values(toeplitz(f, d.nu)).values
                expected = np.sort(np.r_[-sig, sig])
                even_err = max(even_err, float(np.max(np.abs(lam - expected))))
            elif int(np.sum(np.abs(lam) <= 1e-10)) != 1:
                odd_bad.append((name, n))
    ok = not inexact and even_err <= 1e-8 and not odd_bad
    report(6, ok, f"inexact {inexact}, even core err {even_err:.1e}, odd zero-mult failures "
                  f"{odd_bad}")


def test_c07_distribution_convergence(report):
    res = {}
    for name in BUILTINS:
        chk = distribution_check(builtin_symbol(name), "flipped_toeplitz", [32, 256],
                                 "singular", quad_points=2**20)
        res[name] = (chk.aggregate_residual(32), chk.aggregate_residual(256))
    ok = all(b < a for a, b in res.values())
    report(7, ok, "aggregate hat residual n=32 -> n=256: "
                  + ", ".join(f"{k} {a:.3g}->{b:.3g}" for k, (a, b) in res.items()))


def test_c08_hankel_decay(report):
    frac = {}
    for nu in (32, 256):
        sig = singular_values(hankel_block(builtin_symbol("fourth_diff"), nu, "plus")).values
        frac[nu] = float(np.mean(sig > 1e-3 * sig[-1]))
    report(8, frac[256] < frac[32], f"fraction above 1e-3*||H||: {frac}")


def test_c09_flip_keeps_singular_values(report):
    worst = 0.0
    for name in BUILTINS:
        f = builtin_symbol(name)
        for n in range(8, 65):
            a = singular_values(flipped_toeplitz(f, n)).values
            b = singular_values(toeplitz(f, n)).values
            worst = max(worst, float(np.max(np.abs(a - b))))
    report(9, worst <= 1e-8, f"max |sigma(YT) - sigma(T)| = {worst:.1e}")


def test_c10_preconditioning(report):
    f = builtin_symbol("bidiagonal")
    frac = [cluster_measure(preconditioned_spectrum(f, n).values, (-1.0, 1.0), 0.1)
            for n in (32, 64, 128)]
    its = {}
    for n in (64, 256):
        b = np.random.default_rng([0, n]).standard_normal(n)
        _, rep = solve_flipped(f, b, "abs_circulant", rtol=1e-8)
        its[n] = rep.iterations if rep.converged else None
    ok = (frac[0] >= frac[1] >= frac[2] and None not in its.values()
          and its[256] <= its[64] + 2)
    report(10, ok, f"outlier fractions {frac}, MINRES iterations {its}")


def test_c11_trace_and_frobenius(report):
    rng = np.random.default_rng(20240611)
    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 65))
        A = rng.standard_normal((n, n))
        A = A + A.T
        lam = sym_eig(A).values
        tol = 1e-8 * n * np.abs(A).max()
        err = max(abs(lam.sum() - np.trace(A)), abs((lam**2).sum() - (A**2).sum()))
        worst = max(worst, err / tol)
    report(11, worst <= 1.0, f"worst error / tolerance = {worst:.2e}")
