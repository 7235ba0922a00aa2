import mpmath as mp
import numpy as np
import pytest
import scipy.special
from hypothesis import given, settings
from hypothesis import strategies as st

from pmlforge import _elliptic
from pmlforge.errors import DegreeError
from pmlforge.poly_rational import Polynomial
from pmlforge.zolotarev import (
    MAX_K,
    MinimaxSolution,
    Segment,
    chebyshev_lobatto,
    equioscillation_check,
    ratio_abs,
    remez_oracle,
    solve,
    solve_imaginary,
    solve_real,
)


def k1_grid_oracle(a, b, n=200001):
    # the optimal single root equates the two endpoint ratios
    x = np.geomspace(a, b, n)
    err = np.maximum(np.abs((a - x) / (a + x)), np.abs((b - x) / (b + x)))
    i = np.argmin(err)
    return x[i], err[i]


@settings(max_examples=40)
@given(st.floats(0.01, 0.99), st.floats(1e-4, 0.999))
def test_elliptic_matches_mpmath(frac, kc):
    # mpmath takes m = 1 - kc^2 exactly; scipy would round it first
    mp.mp.dps = 30
    m = 1 - mp.mpf(kc) ** 2
    K = _elliptic.ellipk_kc(kc)
    assert K == pytest.approx(float(mp.ellipk(m)), rel=1e-13)
    u = frac * K
    ref = [float(mp.ellipfun(name, u, m=m)) for name in ("sn", "cn", "dn")]
    np.testing.assert_allclose(_elliptic.ellipj_kc(u, kc)[:3], ref, rtol=1e-12, atol=1e-14)


@pytest.mark.parametrize("kc", [0.1, 0.5, 0.9])
def test_elliptic_matches_scipy_moderate_modulus(kc):
    m = 1 - kc**2
    assert _elliptic.ellipk_kc(kc) == pytest.approx(scipy.special.ellipk(m), rel=1e-14)


def test_k1_endpoint_equating():
    sol = solve_real(0.25, 4.0, 1)
    root, err = k1_grid_oracle(0.25, 4.0)
    assert sol.t.roots[0].real == pytest.approx(1.0, abs=1e-8)
    assert root == pytest.approx(1.0, abs=1e-4)
    assert sol.max_ratio == pytest.approx(0.6, abs=1e-8)
    assert err == pytest.approx(0.6, abs=1e-6)


@pytest.mark.parametrize("a, b", [(0.1, 1.0), (0.01, 1.0), (2.0, 3.0)])
def test_k1_general_interval(a, b):
    sol = solve_real(a, b, 1)
    # closed form: root sqrt(ab), error (sqrt(b) - sqrt(a))/(sqrt(b) + sqrt(a))
    assert sol.t.roots[0].real == pytest.approx(np.sqrt(a * b), rel=1e-12)
    expected = (np.sqrt(b) - np.sqrt(a)) / (np.sqrt(b) + np.sqrt(a))
    assert sol.max_ratio == pytest.approx(expected, rel=1e-10)


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_against_remez_oracle(k):
    sol = solve_real(0.1, 1.0, k)
    ref = remez_oracle(0.1, 1.0, k)
    assert sol.max_ratio == pytest.approx(ref.max_ratio, rel=1e-8)
    np.testing.assert_allclose(np.sort(sol.t.roots.real), np.sort(ref.t.roots.real), rtol=1e-6)


def test_remez_oracle_k1():
    assert remez_oracle(0.25, 4.0, 1).t.roots[0].real == pytest.approx(1.0, abs=1e-8)


def test_point_segment():
    sol = solve_real(0.5, 0.5, 3)
    np.testing.assert_allclose(sol.t.roots, [0.5, 0.5, 0.5])
    assert sol.max_ratio == 0.0
    sol = solve_imaginary(0.5, 0.5, 2)
    np.testing.assert_allclose(sol.t.roots, [0.5j, 0.5j])
    assert remez_oracle(0.5, 0.5, 2).max_ratio == 0.0


def test_imaginary_k1():
    sol = solve_imaginary(0.25, 4.0, 1)
    assert sol.t.roots[0] == pytest.approx(1j, abs=1e-8)
    # direct complex evaluation at the endpoints
    for s in (0.25j, 4j):
        assert abs(sol.t(s) / sol.t(-s)) == pytest.approx(0.6, abs=1e-8)


def test_rotation_identity():
    real = solve_real(0.1, 1.0, 2)
    imag = solve_imaginary(0.1, 1.0, 2)
    np.testing.assert_allclose(imag.t.roots, 1j * real.t.roots, atol=1e-15)
    sig = chebyshev_lobatto(0.1, 1.0, 501)
    np.testing.assert_allclose(
        ratio_abs(imag.t.roots, 1j * sig), ratio_abs(real.t.roots, sig), rtol=0, atol=1e-12
    )


def test_equioscillation_k1_endpoints():
    seg = Segment("real", 0.25, 4.0)
    rep = equioscillation_check(solve(seg, 1), seg)
    assert rep.passed
    assert rep.expected_count == 2
    xs = sorted(float(np.real(x)) for x, _ in rep.extrema)
    assert xs == pytest.approx([0.25, 4.0])
    assert all(v == pytest.approx(0.6, abs=1e-12) for _, v in rep.extrema)


@pytest.mark.parametrize("k", [3, 8, 14, MAX_K])
def test_equioscillation_optimal(k):
    seg = Segment("real", 0.1, 1.0)
    rep = equioscillation_check(solve(seg, k), seg)
    assert rep.passed, rep.table()
    assert len(rep.extrema) == k + 1


def test_equioscillation_detects_perturbation():
    seg = Segment("real", 0.1, 1.0)
    sol = solve(seg, 3)
    roots = sol.t.roots.copy()
    roots[0] *= 1.05
    bad = MinimaxSolution(Polynomial.from_unit_roots(roots), sol.max_ratio, [], seg)
    assert not equioscillation_check(bad, seg).passed


def test_decay_is_monotone():
    vals = [solve_real(0.1, 1.0, k).max_ratio for k in range(1, MAX_K + 1)]
    assert all(b < a for a, b in zip(vals, vals[1:]))


@settings(max_examples=20, deadline=None)
@given(st.floats(0.01, 1.0), st.floats(1.5, 100.0), st.integers(1, 10))
def test_sampled_max_never_exceeds_reported(a, ratio, k):
    b = a * ratio
    sol = solve_real(a, b, k)
    sig = chebyshev_lobatto(a, b, 4001)
    assert np.max(ratio_abs(sol.t.roots, sig)) <= sol.max_ratio * (1 + 1e-9)


@pytest.mark.parametrize("a, b, k", [(0.0, 1.0, 2), (1.0, 0.5, 2), (0.1, 1.0, 0), (0.1, 1.0, MAX_K + 1)])
def test_bad_arguments(a, b, k):
    with pytest.raises((ValueError, DegreeError)):
        solve_real(a, b, k)
