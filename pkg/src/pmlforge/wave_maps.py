"""Two-sided DtN maps, propagators and half-space NtD error sweeps.

All 2x2 maps are plain ``numpy`` arrays.  ``Z`` diagonalizes every one of
them: its first column ``(1, 1)/sqrt(2)`` carries ``exp(s)`` / ``tanh(s/2)``,
the second ``(-1, 1)/sqrt(2)`` carries ``exp(-s)`` / ``coth(s/2)``.

Reflection coefficients are taken in the spectral coordinates
``y = Z^T (u, v)``, as ``r = y1/y2 = (u + v)/(v - u)``; this is the
convention under which a half-space approximant with polynomial ``h`` has
``r = h(s)/h(-s)`` and ``u/(s v)`` equal to the Newman function of ``h``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError
from .grid_synthesis import fd_response
from .poly_rational import Polynomial, evaluate, principal_sqrt
from .zolotarev import chebyshev_lobatto

Z = np.array([[1.0, -1.0], [1.0, 1.0]]) / np.sqrt(2.0)
POLE_RTOL = 1e-8
_TINY = 1e-300


def _spectral(d1, d2):
    return Z @ np.diag([d1, d2]) @ Z.T


def continuum_ntd(s):
    s = complex(s)
    sh = np.sinh(s)
    if abs(sh) < 1e-14 * max(1.0, abs(np.cosh(s))):
        raise PoleError(f"sinh(s) = 0 at s = {s}")
    return np.array([[np.cosh(s), -1.0], [-1.0, np.cosh(s)]], dtype=complex) / sh


def continuum_propagator(s):
    s = complex(s)
    c, sh = np.cosh(s), np.sinh(s)
    return np.array([[c, sh], [sh, c]], dtype=complex)


def discrete_exp(mesh, s):
    """``exp(s) ~ t(-s)/t(s)`` for the mesh polynomial ``t``."""
    t = mesh.polynomial()
    num, den = evaluate(t, -s), evaluate(t, s)
    if abs(den) < _TINY:
        raise PoleError(f"t(s) = 0 at s = {s}")
    return num / den


def discrete_tanh_half(mesh, s):
    """``tanh(s/2) ~ (t(-s) - t(s))/(t(s) + t(-s))``."""
    t = mesh.polynomial()
    tp, tm = evaluate(t, s), evaluate(t, -s)
    den = tp + tm
    if abs(den) <= 1e-14 * (abs(tp) + abs(tm)) or abs(den) < _TINY:
        raise PoleError(f"discrete tanh pole at s = {s}")
    return (tm - tp) / den


def discrete_ntd_fe(mesh, s):
    """Two-sided FE map ``Z diag(tanh~(s/2), coth~(s/2)) Z^T``."""
    th = discrete_tanh_half(mesh, complex(s))
    if th == 0:
        raise PoleError(f"discrete coth pole at s = {s}")
    return _spectral(th, 1.0 / th)


def discrete_propagator_fe(mesh, s):
    """``Z diag(exp~(s), exp~(-s)) Z^T`` with ``exp~(s) = t(-s)/t(s)``."""
    s = complex(s)
    e = discrete_exp(mesh, s)
    if abs(e) < _TINY:
        raise PoleError(f"t(-s) = 0 at s = {s}")
    return _spectral(e, 1.0 / e)


def element_propagator(length, s):
    """Crank-Nicolson step across one midpoint-rule element: ``w_{i+1} = M w_i``."""
    a = 0.5 * complex(length) * complex(s)
    lhs = np.array([[1.0, -a], [-a, 1.0]], dtype=complex)
    rhs = np.array([[1.0, a], [a, 1.0]], dtype=complex)
    return np.linalg.solve(lhs, rhs)


def discrete_ntd_fd(grid, s):
    """Two-sided FD map ``Z diag(f, 1/f) Z^T`` from the staggered recursion."""
    f = fd_response(grid, complex(s))
    if f == 0 or not np.isfinite(f):
        raise PoleError(f"FD response vanishes or blows up at s = {s}")
    return _spectral(f, 1.0 / f)


def spectral_reflection(w):
    """``r = (u + v)/(v - u)`` for a boundary pair ``w = (u, v)``."""
    u, v = w
    if abs(v - u) < _TINY:
        raise PoleError("outgoing component vanishes")
    return (u + v) / (v - u)


@dataclass(frozen=True)
class HalfspaceErrorSample:
    lam: complex
    exact: complex
    approx: complex
    rel_error: float
    reflection_modulus: float
    interval: str = ""
    pole: bool = False

    @property
    def s(self):
        return complex(principal_sqrt(self.lam))


@dataclass
class SweepResult:
    samples: list
    maxima: dict = field(default_factory=dict)

    def interval(self, name):
        return [x for x in self.samples if x.interval == name]


def _sweep_chunk(h, lam):
    s = principal_sqrt(lam)
    hp = evaluate(h, s)
    hm = evaluate(h, -s)
    with np.errstate(divide="ignore", invalid="ignore"):
        approx = (hp - hm) / (s * (hp + hm))
        refl = np.abs(hp / hm) if h.roots is None or not h.roots.size else np.prod(
            np.abs((s[:, None] - h.roots) / (-s[:, None] - h.roots)), axis=-1
        )
        exact = -1.0 / s
        rel = np.abs(approx - exact) / np.abs(exact)
        pole = np.abs(hp + hm) <= POLE_RTOL * (np.abs(hp) + np.abs(hm))
        pole |= np.abs(hm) < _TINY
    return s, exact, approx, rel, refl, pole


def _threads():
    try:
        return max(1, int(os.environ.get("PMLFORGE_THREADS", "1")))
    except ValueError:
        return 1


def halfspace_error_sweep(h, window, n_samples=2001, threads=None):
    """NtD error of the Newman approximant of ``h`` over both spectral intervals.

    ``lam`` runs over Chebyshev-Lobatto points of ``[-1, lambda1]``
    (propagative) and ``[lambda2, lambda3]`` (evanescent).  Samples sitting
    on a pole of ``R`` are flagged and left out of the maxima.
    """
    intervals = [
        ("propagative", -1.0, window.lambda1),
        ("evanescent", window.lambda2, window.lambda3),
    ]
    threads = threads or _threads()
    samples, maxima = [], {}
    for name, lo, hi in intervals:
        lam = chebyshev_lobatto(lo, hi, n_samples).astype(complex)
        chunks = np.array_split(lam, threads) if threads > 1 else [lam]
        if threads > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                parts = list(pool.map(lambda c: _sweep_chunk(h, c), chunks))
        else:
            parts = [_sweep_chunk(h, lam)]
        s, exact, approx, rel, refl, pole = (np.concatenate(p) for p in zip(*parts))
        for i in range(lam.size):
            samples.append(
                HalfspaceErrorSample(
                    complex(lam[i]), complex(exact[i]), complex(approx[i]),
                    float(rel[i]), float(refl[i]), name, bool(pole[i]),
                )
            )
        ok = ~pole & np.isfinite(rel)
        maxima[name] = {
            "reflection": float(np.max(refl[ok])) if ok.any() else float("nan"),
            "rel_error": float(np.max(rel[ok])) if ok.any() else float("nan"),
        }
    return SweepResult(samples, maxima)


def adding_layer_probe(h, window, length, n_samples=401):
    """Append one midpoint element in front of a half-space approximant.

    The new polynomial is ``t_l(s)^2 h(s)`` with ``t_l = 1 - l s/2``; reports
    whether the per-sample NtD error on the evanescent interval did not grow.
    """
    el = Polynomial.from_unit_roots([2.0 / length])
    h_new = el * el * h
    before = halfspace_error_sweep(h, window, n_samples).interval("evanescent")
    after = halfspace_error_sweep(h_new, window, n_samples).interval("evanescent")
    worse = [
        (a.lam, a.rel_error, b.rel_error)
        for a, b in zip(before, after)
        if not (a.pole or b.pole) and b.rel_error > a.rel_error * (1 + 1e-12) + 1e-15
    ]
    return {"passed": not worse, "n_samples": len(before), "increased": worse}

