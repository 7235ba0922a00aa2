"""First Zolotarev problem on a single segment.

Find the degree-``k`` polynomial ``t`` with roots in ``[a, b]`` minimizing
``max |t(s)/t(-s)|`` over the segment.  The roots have a closed form in
Jacobi's ``dn``:

    x_j = b * dn((2j - 1) K / (2k) | m),   m = 1 - (a/b)^2,

after which one guarded Remez step is applied and the result is checked for
equal ripple.  The imaginary-segment problem is the real one rotated by
``i``, since ``|(i sigma - i beta)/(-i sigma - i beta)| = |(sigma - beta)/(sigma + beta)|``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import _elliptic
from .errors import ConvergenceError
from .poly_rational import Polynomial

MAX_K = 20
N_SAMPLES = 2001
RIPPLE_RTOL = 1e-6
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class Segment:
    """``[a, b]`` on the positive real axis, or ``i[a, b]`` on the imaginary one."""

    axis: str
    a: float
    b: float

    def __post_init__(self):
        if self.axis not in ("real", "imaginary"):
            raise ValueError(f"unknown axis {self.axis!r}")
        if not 0.0 < self.a <= self.b:
            raise ValueError(f"need 0 < a <= b, got a={self.a}, b={self.b}")

    @property
    def rotation(self):
        return 1.0 if self.axis == "real" else 1j

    def points(self, sigma):
        """Map real magnitudes in ``[a, b]`` onto the segment."""
        return self.rotation * np.asarray(sigma, dtype=float)

    def chebyshev(self, n=N_SAMPLES):
        """Chebyshev-Lobatto magnitudes on ``[a, b]``, ascending, endpoints included."""
        return chebyshev_lobatto(self.a, self.b, n)


def chebyshev_lobatto(a, b, n):
    if n <= 1:
        return np.array([0.5 * (a + b)])
    x = np.cos(np.pi * np.arange(n - 1, -1, -1) / (n - 1))
    out = 0.5 * (a + b) + 0.5 * (b - a) * x
    out[0], out[-1] = a, b
    return out


@dataclass(frozen=True, eq=False)
class MinimaxSolution:
    t: Polynomial
    max_ratio: float
    extrema: list = field(default_factory=list)
    segment: Segment | None = None


@dataclass
class EquioscillationReport:
    passed: bool
    max_ratio: float
    expected_count: int
    extrema: list
    spread: float

    def table(self):
        rows = [f"{'s':>28}  {'|t(s)/t(-s)|':>22}"]
        for s, v in self.extrema:
            rows.append(f"{complex(s)!s:>28}  {v:22.15e}")
        return "\n".join(rows)


def ratio_abs(roots, s):
    """``prod |(s - x)/(s + x)|`` over the given roots."""
    s = np.asarray(s, dtype=complex)
    roots = np.asarray(roots, dtype=complex)
    if roots.size == 0:
        return np.ones(s.shape)
    return np.prod(np.abs((s[..., None] - roots) / (s[..., None] + roots)), axis=-1)


def golden_max(fn, lo, hi, xtol=1e-14):
    """Golden-section search for the maximum of a unimodal ``fn`` on ``[lo, hi]``."""
    c = hi - _GOLDEN * (hi - lo)
    d = lo + _GOLDEN * (hi - lo)
    fc, fd = fn(c), fn(d)
    tol = xtol * max(abs(lo), abs(hi), 1.0)
    while hi - lo > tol:
        if fc >= fd:
            hi, d, fd = d, c, fc
            c = hi - _GOLDEN * (hi - lo)
            fc = fn(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + _GOLDEN * (hi - lo)
            fd = fn(d)
    x = 0.5 * (lo + hi)
    return x, fn(x)


def local_maxima(fn, a, b, n=N_SAMPLES):
    """Local maxima of ``fn`` on ``[a, b]``: dense Chebyshev scan, golden refinement.

    ``fn`` maps an array of magnitudes to real values.  Endpoints are
    reported when they dominate their neighbour.  Returns ``[(sigma, value)]``
    in ascending ``sigma``.
    """
    if a == b:
        return [(a, float(fn(np.array([a]))[0]))]
    sig = chebyshev_lobatto(a, b, n)
    v = fn(sig)
    found = []
    if v[0] >= v[1]:
        found.append((sig[0], float(v[0])))
    scalar = lambda x: float(fn(np.array([x]))[0])  # noqa: E731
    for i in range(1, n - 1):
        if v[i] >= v[i - 1] and v[i] > v[i + 1]:
            found.append(golden_max(scalar, sig[i - 1], sig[i + 1]))
    if v[-1] > v[-2]:
        found.append((sig[-1], float(v[-1])))
    return found


def segment_maximum(fn, a, b, n=N_SAMPLES):
    """Refined global maximum of ``fn`` on ``[a, b]``."""
    return max(v for _, v in local_maxima(fn, a, b, n))


def zolotarev_roots(a, b, k):
    """Closed-form optimal roots on ``[a, b]``, descending."""
    if a == b:
        return np.full(k, float(a))
    kc = a / b
    K = _elliptic.ellipk_kc(kc)
    return np.array(
        [b * _elliptic.ellipj_kc((2 * j - 1) * K / (2 * k), kc)[2] for j in range(1, k + 1)]
    )


def _extremal_set(roots, a, b):
    fn = lambda sig: ratio_abs(roots, sig)  # noqa: E731
    return local_maxima(fn, a, b)


def _remez_step(roots, a, b):
    """One Newton step on the equal-level equations at the current extremal set."""
    ext = _extremal_set(roots, a, b)
    k = roots.size
    if len(ext) != k + 1:
        return None
    e = np.array([x for x, _ in ext])
    x = np.sort(roots)
    resid = np.array(
        [np.sum(np.log(np.abs((ei - x) / (ei + x)))) for ei in e]
    )
    level = np.mean(resid)
    F = resid - level
    J = np.empty((k + 1, k + 1))
    J[:, :k] = -2.0 * e[:, None] / (e[:, None] ** 2 - x[None, :] ** 2)
    J[:, k] = -1.0
    try:
        delta = np.linalg.solve(J, -F)
    except np.linalg.LinAlgError:
        return None
    new = x + delta[:k]
    if np.any(new <= a) or np.any(new >= b):
        return None
    return new


def _check_args(a, b, k):
    if not 0.0 < a <= b:
        raise ValueError(f"need 0 < a <= b, got a={a}, b={b}")
    if not 1 <= k <= MAX_K:
        raise ValueError(f"degree must lie in [1, {MAX_K}], got {k}")


def solve_real(a, b, k):
    """Optimal degree-``k`` polynomial with roots in ``[a, b]``."""
    _check_args(a, b, k)
    seg = Segment("real", a, b)
    roots = zolotarev_roots(a, b, k)
    if a == b:
        return MinimaxSolution(Polynomial.from_unit_roots(roots), 0.0, [(complex(a), 0.0)], seg)
    trace = []
    ext = _extremal_set(roots, a, b)
    best = max(v for _, v in ext)
    trace.append(("elliptic", best))
    polished = _remez_step(roots, a, b)
    if polished is not None:
        ext_p = _extremal_set(polished, a, b)
        val = max(v for _, v in ext_p)
        trace.append(("remez", val))
        if val < best:
            roots, ext, best = polished, ext_p, val
    if not np.isfinite(best) or best >= 1.0:
        raise ConvergenceError("Zolotarev construction produced no contraction", trace)
    t = Polynomial.from_unit_roots(np.sort(roots)[::-1])
    extrema = [(complex(x), v) for x, v in ext]
    return MinimaxSolution(t, float(best), extrema, seg)


def solve_imaginary(a, b, k):
    """Optimal degree-``k`` polynomial with roots on ``i[a, b]``."""
    real = solve_real(a, b, k)
    t = Polynomial.from_unit_roots(1j * real.t.roots.real)
    extrema = [(1j * s.real, v) for s, v in real.extrema]
    return MinimaxSolution(t, real.max_ratio, extrema, Segment("imaginary", a, b))


def solve(segment, k):
    if segment.axis == "real":
        return solve_real(segment.a, segment.b, k)
    return solve_imaginary(segment.a, segment.b, k)


def equioscillation_check(sol, seg, rtol=RIPPLE_RTOL):
    """Equal-ripple test: ``k + 1`` maxima (endpoints included), all equal.

    The maxima are those of ``|t(s)/t(-s)|`` evaluated from the roots of
    ``sol.t`` along ``seg``; PASS also requires them to match
    ``sol.max_ratio``.
    """
    roots = sol.t.find_roots()
    k = roots.size
    rot = seg.rotation
    fn = lambda sig: ratio_abs(roots, rot * sig)  # noqa: E731
    ext = local_maxima(fn, seg.a, seg.b)
    extrema = [(rot * x, v) for x, v in ext]
    if seg.a == seg.b:
        val = ext[0][1]
        ok = val <= max(sol.max_ratio, 1e-300) * (1 + rtol) or val < 1e-12
        return EquioscillationReport(ok, sol.max_ratio, 1, extrema, 0.0)
    values = np.array([v for _, v in ext])
    ref = sol.max_ratio if sol.max_ratio > 0 else values.max()
    spread = float(np.max(np.abs(values - ref)) / ref)
    passed = len(ext) == k + 1 and spread <= rtol
    return EquioscillationReport(passed, sol.max_ratio, k + 1, extrema, spread)


def remez_oracle(a, b, k, max_iter=200, tol=1e-13):
    """Exchange iteration on the root vector; independent of the elliptic route.

    Test-scale only (``k <= 6``).  Extrema are located on a dense geometric
    grid and refined with SciPy's bounded scalar minimizer; the equal-level
    system is solved with ``scipy.optimize.fsolve``.
    """
    from scipy.optimize import fsolve, minimize_scalar

    if not 0.0 < a <= b:
        raise ValueError(f"need 0 < a <= b, got a={a}, b={b}")
    if not 1 <= k <= 6:
        raise ValueError("remez_oracle supports 1 <= k <= 6")
    seg = Segment("real", a, b)
    if a == b:
        t = Polynomial.from_unit_roots(np.full(k, float(a)))
        return MinimaxSolution(t, 0.0, [(complex(a), 0.0)], seg)

    grid = np.geomspace(a, b, 8001)

    def log_ratio(x, s):
        return np.sum(np.log(np.abs((s[..., None] - x) / (s[..., None] + x))), axis=-1)

    def extremal_points(x):
        xs = np.sort(x)
        pts = [a]
        for lo, hi in zip(xs[:-1], xs[1:]):
            idx = np.flatnonzero((grid > lo) & (grid < hi))
            if idx.size == 0:
                pts.append(float(np.sqrt(lo * hi)))
                continue
            j = idx[np.argmax(log_ratio(xs, grid[idx]))]
            res = minimize_scalar(
                lambda u: -log_ratio(xs, np.array([u]))[0],
                bounds=(max(grid[j - 1], lo), min(grid[j + 1], hi)),
                method="bounded",
                options={"xatol": 1e-14 * hi},
            )
            pts.append(float(res.x))
        pts.append(b)
        return np.array(pts)

    x = a * (b / a) ** ((np.arange(k) + 0.5) / k)
    trace = []
    for it in range(max_iter):
        e = extremal_points(x)
        levels = log_ratio(x, e)
        spread = float(np.max(levels) - np.min(levels))
        trace.append((it, float(np.max(levels)), spread))
        if spread < tol:
            break

        def eqs(z):
            return log_ratio(z[:k], e) - z[k]

        z0 = np.concatenate([x, [np.mean(levels)]])
        with warnings.catch_warnings():
            # fsolve warns once it reaches machine precision
            warnings.simplefilter("ignore", RuntimeWarning)
            z = fsolve(eqs, z0, xtol=1e-15)
        new = np.clip(np.sort(z[:k]), a * (1 + 1e-12), b * (1 - 1e-12))
        if np.max(np.abs(new - x)) <= 1e-15 * b:
            x = new
            break
        x = new
    else:
        raise ConvergenceError(f"Remez oracle: no convergence in {max_iter} exchanges", trace)

    e = extremal_points(x)
    ext = [(complex(s), float(np.exp(v))) for s, v in zip(e, log_ratio(x, e))]
    best = max(v for _, v in ext)
    return MinimaxSolution(Polynomial.from_unit_roots(np.sort(x)[::-1]), best, ext, seg)
