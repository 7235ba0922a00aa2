"""Conversions between odd/even rational functions, staggered FD grids and FE meshes.

The FD response of a staggered grid is the continued fraction

    f(s) = 1/(hhat_1 s + 1/(h_1 s + 1/(hhat_2 s + ... + 1/(h_k s)))),

a function of the form ``s p(s^2)/q(s^2)`` with ``deg p = k - 1``,
``deg q = k``.  A midpoint-rule FE mesh with lengths ``l_i`` gives
``t(s) = prod(1 - l_i s/2)``, and for an even element count its discrete
``tanh(s/2)`` is such an ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import BreakdownError, DegenerateError, PMLForgeError
from .poly_rational import OddEvenRational, Polynomial, combine_odd_even, split_odd_even

EXTENDED_PRECISION_ABOVE = 10
EXTENDED_DPS = 34
_CANCEL_RTOL = {"double": 1e-13, "extended": 1e-28}


@dataclass(frozen=True, eq=False)
class FDGrid:
    """Staggered steps.  With ``terminal_unbounded`` the last ``h`` is infinite
    and is not stored, so ``len(h) == len(hhat) - 1``."""

    hhat: np.ndarray
    h: np.ndarray
    terminal_unbounded: bool = False

    def __post_init__(self):
        hhat = np.atleast_1d(np.asarray(self.hhat, dtype=complex))
        h = np.atleast_1d(np.asarray(self.h, dtype=complex))
        expected = hhat.size - 1 if self.terminal_unbounded and hhat.size else hhat.size
        if h.size != expected:
            raise ValueError(f"expected {expected} h steps for {hhat.size} hhat steps, got {h.size}")
        object.__setattr__(self, "hhat", hhat)
        object.__setattr__(self, "h", h)

    @property
    def k(self):
        return self.hhat.size

    def __call__(self, s):
        return fd_response(self, s)


@dataclass(frozen=True, eq=False)
class FEMesh:
    lengths: np.ndarray
    total: complex = 0j

    def __post_init__(self):
        lengths = np.atleast_1d(np.asarray(self.lengths, dtype=complex))
        if np.any(lengths == 0):
            raise ValueError("zero element length")
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "total", complex(lengths.sum()))

    @property
    def n(self):
        return self.lengths.size

    def polynomial(self):
        """``t(s) = prod(1 - l_i s/2)`` in root form."""
        return Polynomial.from_unit_roots(2.0 / self.lengths)


def fd_response(grid, s):
    """``f(s) = -u_1/v_0`` from the staggered recursion with ``u_{k+1} = 0``.

    Runs the odd-grid difference equations backwards from the far end; the
    pair is rescaled every step, which leaves the ratio unchanged.
    """
    s = np.asarray(s, dtype=complex)
    k = grid.k
    if k == 0:
        out = np.zeros(s.shape, dtype=complex)
        return out[()] if out.ndim == 0 else out
    if grid.terminal_unbounded:
        u = np.ones(s.shape, dtype=complex)
        v = -grid.hhat[-1] * s * u
        start = k - 1
    else:
        v = np.ones(s.shape, dtype=complex)
        u = -grid.h[k - 1] * s * v
        v = v - grid.hhat[k - 1] * s * u
        start = k - 1
    for i in range(start - 1, -1, -1):
        u = u - grid.h[i] * s * v
        v = v - grid.hhat[i] * s * u
        scale = np.maximum(np.abs(u), np.abs(v))
        scale = np.where(scale == 0, 1.0, scale)
        u, v = u / scale, v / scale
    out = -u / v
    return out[()] if out.ndim == 0 else out


def grid_to_rational(grid):
    """Continued fraction to ``(p_tilde, q_tilde)``, built bottom-up."""
    k = grid.k
    if k == 0:
        return OddEvenRational(Polynomial([0.0]), Polynomial([1.0]))
    if grid.terminal_unbounded:
        P = np.array([1.0 + 0j])
        Q = np.array([0.0, grid.hhat[-1]])
    else:
        P = np.array([grid.h[-1]])
        Q = np.array([1.0, grid.hhat[-1] * grid.h[-1]])
    for i in range(k - 2, -1, -1):
        A = npoly.polyadd(grid.h[i] * Q, P)
        Q = npoly.polyadd(grid.hhat[i] * npoly.polymulx(A), Q)
        P = A
    return OddEvenRational(Polynomial(P), Polynomial(Q))


def _cancelled(value, a, b, rtol):
    return abs(value) <= rtol * max(abs(a), abs(b))


def _extract(P, Q, k, mode):
    """Euclidean extraction on coefficient lists; works for complex or mpc."""
    rtol = _CANCEL_RTOL[mode]
    hhat, h = [], []
    terminal = False
    for stage in range(1, k + 1):
        m = k - stage + 1
        scale = Q[m]
        Q = [c / scale for c in Q]
        P = [c / scale for c in P]
        if P[m - 1] == 0:
            raise BreakdownError("zero leading numerator coefficient", stage)
        hh = Q[m] / P[m - 1]
        Qn = [Q[0]] + [Q[j] - hh * P[j - 1] for j in range(1, m)]
        if m >= 2 and _cancelled(Qn[m - 1], Q[m - 1], hh * P[m - 2], rtol):
            raise BreakdownError("premature termination: p_tilde and q_tilde share a factor", stage)
        hhat.append(hh)
        if m == 1 and Qn[0] == 0:
            terminal = True
            break
        step = P[m - 1] / Qn[m - 1]
        Pn = [P[j] - step * Qn[j] for j in range(m - 1)]
        if m >= 2 and _cancelled(Pn[m - 2], P[m - 2], step * Qn[m - 2], rtol):
            raise BreakdownError("premature termination: p_tilde and q_tilde share a factor", stage)
        h.append(step)
        P, Q = Pn, Qn
    return hhat, h, terminal


def rational_to_grid(f, extended=None):
    """Staggered steps whose continued fraction equals ``f`` identically.

    Above ``EXTENDED_PRECISION_ABOVE`` step pairs the division runs in
    mpmath at ``EXTENDED_DPS`` digits; each Euclidean stage costs about a
    digit in plain double.
    """
    k = f.q_tilde.degree
    if f.p_tilde.is_zero or k == 0:
        if not f.p_tilde.is_zero:
            raise BreakdownError("nonzero numerator over a constant denominator", 1)
        return FDGrid([], [], terminal_unbounded=True)
    if f.p_tilde.degree > k - 1:
        raise ValueError("deg p_tilde must be at most deg q_tilde - 1")
    P = np.zeros(k, dtype=complex)
    P[: f.p_tilde.coeffs.size] = f.p_tilde.coeffs
    Q = f.q_tilde.coeffs
    if extended is None:
        extended = k > EXTENDED_PRECISION_ABOVE
    if extended:
        with mpmath.workdps(EXTENDED_DPS):
            Pm = [mpmath.mpc(c) for c in P]
            Qm = [mpmath.mpc(c) for c in Q]
            hhat, h, terminal = _extract(Pm, Qm, k, "extended")
            hhat = [complex(c) for c in hhat]
            h = [complex(c) for c in h]
    else:
        hhat, h, terminal = _extract(list(P), list(Q), k, "double")
    return FDGrid(hhat, h, terminal_unbounded=terminal)


def mesh_from_polynomial(t):
    """FE lengths ``l_i = 2/s_i`` over the roots of ``t``."""
    roots = t.find_roots()
    if roots.size and np.min(np.abs(roots)) == 0:
        raise PMLForgeError("t has a root at s = 0")
    return FEMesh(2.0 / roots)


def fe_to_fd(mesh):
    """FD grid whose response equals the mesh's discrete ``tanh(s/2)``."""
    if mesh.n % 2:
        raise ValueError("even element count required")
    if mesh.n == 0:
        return FDGrid([], [], terminal_unbounded=True)
    t = Polynomial(mesh.polynomial().coeffs)
    return rational_to_grid(split_odd_even(t))


def fd_to_fe(grid):
    """FE mesh of ``2k`` elements with the same two-sided map as ``grid``."""
    r = grid_to_rational(grid)
    try:
        t = combine_odd_even(r)
    except DegenerateError as exc:
        raise BreakdownError(str(exc)) from exc
    if t.coeffs[0] == 0:
        raise PMLForgeError("t has a root at s = 0 (unbounded terminal step)")
    return mesh_from_polynomial(t)


def tanh_interpolant(points):
    """Degree-``n`` ``t`` with ``t(-s_i)/t(s_i) = exp(s_i)`` at the given points, ``t(0) = 1``."""
    s = np.asarray(points, dtype=complex)
    n = s.size
    j = np.arange(1, n + 1)
    e = np.exp(s)
    A = (-s[:, None]) ** j - e[:, None] * s[:, None] ** j
    c = np.linalg.solve(A, e - 1.0)
    return Polynomial(np.concatenate([[1.0], c]))
