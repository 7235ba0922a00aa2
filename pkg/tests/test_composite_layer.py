import numpy as np
import pytest

from pmlforge.composite_layer import (
    AssembledLayer,
    SpectralWindow,
    assemble_full_grid,
    build_composite,
    compose_reflection,
    tail_from_fk,
    tail_grid,
)
from pmlforge.grid_synthesis import FDGrid, fd_response
from pmlforge.poly_rational import OddEvenRational, Polynomial, newman_ntd, reflection, split_odd_even
from pmlforge.wave_maps import element_propagator, spectral_reflection
from pmlforge.zolotarev import chebyshev_lobatto, ratio_abs, solve_imaginary, solve_real

WINDOW = SpectralWindow(-0.01, 0.01, 1.0)


def probe(n=64, seed=0):
    rng = np.random.default_rng(seed)
    return np.exp(rng.uniform(np.log(0.05), np.log(5), n)) * np.exp(1j * rng.uniform(-1.4, 1.4, n))


@pytest.fixture(scope="module")
def design():
    return build_composite(WINDOW, 8, 4)


def test_compose_examples():
    assert compose_reflection(0.3 - 0.1j, 1.0) == pytest.approx((0.3 - 0.1j) ** 2)
    assert compose_reflection(0.0, 0.7 + 2j) == 0


def chain_reflection(lengths, h2, s):
    # independent of AssembledLayer: start from the tail's outgoing pair
    # (h2(s) - h2(-s), h2(s) + h2(-s)) ~ (-f, 1) and walk back element by element
    hp, hm = h2(s), h2(-s)
    w = np.array([hp - hm, hp + hm], dtype=complex)
    for length in lengths[::-1]:
        w = np.linalg.solve(element_propagator(length, s), w)
    return spectral_reflection(w)


@pytest.mark.parametrize("seed", range(4))
def test_compose_matches_propagator_chain(seed):
    rng = np.random.default_rng(seed)
    t1 = Polynomial.from_unit_roots(rng.uniform(0.2, 2, 2) + 1j * rng.uniform(-1, 1, 2))
    h2 = Polynomial.from_unit_roots(rng.uniform(0.2, 2, 2) * np.exp(1j * rng.uniform(-1, 1, 2)))
    lengths = 2.0 / t1.roots
    for s in probe(16, seed):
        expected = compose_reflection(reflection(t1, s), reflection(h2, s))
        assert chain_reflection(lengths, h2, s) == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_tail_from_fk_hand_example():
    f = OddEvenRational(Polynomial([1.0]), Polynomial([1.0, 1.0]))
    h2 = tail_from_fk(f)
    np.testing.assert_allclose(h2.coeffs, [1.0, -1.0, 1.0], atol=1e-15)
    for s in (0.4, 1 + 2j):
        lhs = (h2(-s) - h2(s)) / (h2(s) + h2(-s))
        assert lhs == pytest.approx(s / (s**2 + 1), rel=1e-14)


def test_tail_from_fk_dirichlet():
    assert tail_from_fk(OddEvenRational(Polynomial([0.0]), Polynomial([2.0]))).degree == 0


def test_tail_from_fk_roundtrip():
    h2 = Polynomial([3.0, 0.5 - 1j, 2.0, 0.3j, 1.0])
    back = tail_from_fk(split_odd_even(h2))
    np.testing.assert_allclose(back.coeffs, h2.monic().coeffs, rtol=1e-12, atol=1e-14)


def test_tail_grid_reflection():
    h2 = solve_imaginary(0.1, 1.0, 3).t ** 2
    grid = tail_grid(h2)
    s = probe()
    f = fd_response(grid, s)
    np.testing.assert_allclose((1 - f) / (1 + f), reflection(h2, s), rtol=1e-10)


@pytest.mark.parametrize("split_l, k_total", [(8, 8), (0, 8), (9, 8)])
def test_split_bounds(split_l, k_total):
    with pytest.raises(ValueError):
        build_composite(WINDOW, k_total, split_l)


def test_tail_power_one_needs_even_tail():
    with pytest.raises(ValueError):
        build_composite(WINDOW, 7, 4, tail_power=1)
    d = build_composite(WINDOW, 8, 4, tail_power=1)
    assert d.h2.degree == 4


def test_factors(design):
    assert design.t_e.degree == 4 and design.t_p.degree == 4
    assert np.all(np.abs(design.t_e.roots.imag) == 0)
    assert np.all(np.abs(design.t_p.roots.real) == 0)
    np.testing.assert_allclose(design.h(0.3 + 0.2j), (design.t_e(0.3 + 0.2j) ** 2) * design.t_p(0.3 + 0.2j) ** 2)


def test_cross_interval_modulus_one(design):
    sig_p = chebyshev_lobatto(0.1, 1.0, 500)
    sig_e = chebyshev_lobatto(0.1, 1.0, 500)
    assert np.max(np.abs(ratio_abs(design.t_e.roots, 1j * sig_p) - 1)) < 1e-10
    assert np.max(np.abs(ratio_abs(design.t_p.roots, sig_e) - 1)) < 1e-10


def test_achieved_maxima_are_component_optima_squared(design):
    me = solve_real(0.1, 1.0, 4).max_ratio
    mp = solve_imaginary(0.1, 1.0, 4).max_ratio
    a = design.achieved
    assert a.max_reflection_evanescent == pytest.approx(me**2, rel=1e-10)
    assert a.max_reflection_propagative == pytest.approx(mp**2, rel=1e-10)
    assert design.max_ratio_e == pytest.approx(me, rel=1e-14)


def test_assembled_bookkeeping(design):
    layer = assemble_full_grid(design)
    assert layer.element_count == design.split_l
    assert layer.tail_pairs == design.k_total - design.split_l
    assert layer.segment_fd is not None and layer.segment_fd.k == design.split_l // 2


def test_assembled_reflection_and_ntd(design):
    layer = assemble_full_grid(design)
    for s in probe():
        assert layer.reflection(s) == pytest.approx(design.reflection(s), rel=1e-10, abs=1e-14)
        assert layer.ntd(s) == pytest.approx(newman_ntd(design.h, s**2), rel=1e-10)


def test_assembled_matches_independent_chain(design):
    layer = assemble_full_grid(design)
    for s in probe(16, 3):
        assert layer.reflection(s) == pytest.approx(
            chain_reflection(design.fe_segment.lengths, design.h2, s), rel=1e-10, abs=1e-14
        )


def test_dirichlet_tail_layer():
    layer = AssembledLayer(np.array([1.0, 0.5]), FDGrid([], [], terminal_unbounded=True))
    t1 = Polynomial.from_unit_roots([2.0, 4.0])
    for s in probe(8):
        assert layer.reflection(s) == pytest.approx(reflection(t1, s) ** 2, rel=1e-12)


def test_window_validation():
    with pytest.raises(ValueError):
        SpectralWindow(0.5, 0.01, 1.0)
    with pytest.raises(ValueError):
        SpectralWindow(-0.5, 1.0, 0.5)
    assert SpectralWindow(-1.0, 0.5, 0.5).propagative.a == 1.0
