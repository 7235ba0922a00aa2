"""Choosing the degree split between the evanescent and propagative factors.

Per-interval maxima are measured on the assembled design, not taken from
the Zolotarev solutions: ``max_e`` / ``max_p`` are the maxima of
``|h(s)/h(-s)|**(1/2)`` over each segment, i.e. of ``|t(s)/t(-s)|`` when
``h = t^2``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .composite_layer import SpectralWindow, build_composite
from .zolotarev import chebyshev_lobatto, ratio_abs, segment_maximum

BALANCE_BAND = 10.0


@dataclass
class BalanceReport:
    window: SpectralWindow
    k_total: int
    per_split: list = field(default_factory=list)
    chosen_l: int = 0
    balanced: bool = False

    def table(self):
        lines = [f"{'l':>3}  {'max_e':>14}  {'max_p':>14}  {'max_e/max_p':>12}"]
        for l, me, mp, ratio in self.per_split:
            mark = " *" if l == self.chosen_l else ""
            lines.append(f"{l:>3}  {me:14.6e}  {mp:14.6e}  {ratio:12.4g}{mark}")
        return "\n".join(lines)


def split_maxima(design):
    """Refined maxima of ``|h(s)/h(-s)|**(1/2)`` on the evanescent and propagative segments."""
    roots = design.h.roots
    out = []
    for seg in (design.window.evanescent, design.window.propagative):
        rot = seg.rotation
        fn = lambda sig: np.sqrt(ratio_abs(roots, rot * sig))  # noqa: E731
        out.append(segment_maximum(fn, seg.a, seg.b))
    return tuple(out)


def _ratio(me, mp):
    if mp == 0:
        return float("inf") if me > 0 else 1.0
    return me / mp


def is_balanced(me, mp, band=BALANCE_BAND):
    r = _ratio(me, mp)
    return 1.0 / band <= r <= band


def design_balanced(window, k_total, tail_power=2, band=BALANCE_BAND, workers=1):
    """Scan every split ``l`` and keep the one minimizing ``max(max_e, max_p)``."""
    if k_total < 2:
        raise ValueError("k_total must be at least 2")
    splits = [l for l in range(1, k_total) if tail_power == 2 or (k_total - l) % 2 == 0]
    if not splits:
        raise ValueError("no admissible split for this tail_power")

    def run(l):
        d = build_composite(window, k_total, l, tail_power)
        return d, split_maxima(d)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, splits))
    else:
        results = [run(l) for l in splits]

    report = BalanceReport(window, k_total)
    best = None
    for l, (d, (me, mp)) in zip(splits, results):
        report.per_split.append((l, me, mp, _ratio(me, mp)))
        if best is None or max(me, mp) < best[0]:
            best = (max(me, mp), l, d, me, mp)
    _, report.chosen_l, design, me, mp = best
    report.balanced = is_balanced(me, mp, band)
    return design, report


def fixed_split_report(design, band=BALANCE_BAND):
    me, mp = split_maxima(design)
    return BalanceReport(
        design.window, design.k_total, [(design.split_l, me, mp, _ratio(me, mp))],
        design.split_l, is_balanced(me, mp, band),
    )


@dataclass
class ProbeEntry:
    window: SpectralWindow
    chosen_l: int
    max_e: float
    max_p: float
    gap: float
    product_value: float
    brute_force_value: float | None
    excess: float | None
    free_roots_value: float | None = None


def _objective_grid(window, n):
    se, sp = window.evanescent, window.propagative
    return np.concatenate([
        se.points(chebyshev_lobatto(se.a, se.b, n)),
        sp.points(chebyshev_lobatto(sp.a, sp.b, n)),
    ])


def _union_max(roots, window):
    vals = []
    for seg in (window.evanescent, window.propagative):
        rot = seg.rotation
        vals.append(segment_maximum(lambda sig: ratio_abs(roots, rot * sig), seg.a, seg.b))
    return max(vals)


def brute_force_joint(window, k_total, n_starts=50, seed=0, n_grid=401, free_roots=False):
    """Multistart Nelder-Mead bound on ``min max |t(s)/t(-s)|`` over both segments.

    With ``free_roots=False`` the ``k_total`` roots of ``t`` are confined to
    the two segments, every assignment of roots to segments being tried.
    With ``free_roots=True`` they range over the open right half-plane.
    Returns ``(value, roots)``; a bound, not a certified optimum.
    """
    from scipy.optimize import minimize

    if k_total > 4:
        raise ValueError("brute force is limited to k_total <= 4")
    rng = np.random.default_rng(seed)
    grid = _objective_grid(window, n_grid)
    se, sp = window.evanescent, window.propagative

    def grid_obj(roots):
        return float(np.max(ratio_abs(roots, grid)))

    best_val, best_roots = np.inf, None
    if free_roots:
        lo, hi = min(se.a, sp.a), max(se.b, sp.b)

        def decode(p):
            mod = np.exp(np.clip(p[0::2], np.log(lo) - 1, np.log(hi) + 1))
            ang = 0.5 * np.pi * np.tanh(p[1::2]) * 0.999
            return mod * np.exp(1j * ang)

        for _ in range(n_starts):
            p0 = np.empty(2 * k_total)
            p0[0::2] = rng.uniform(np.log(lo), np.log(hi), k_total)
            p0[1::2] = rng.uniform(-1.0, 2.0, k_total)
            res = minimize(lambda p: grid_obj(decode(p)), p0, method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000 * k_total})
            if res.fun < best_val:
                best_val, best_roots = res.fun, decode(res.x)
    else:
        for j in range(k_total + 1):
            def decode(p, j=j):
                u = np.clip(p, 0.0, 1.0)
                e = se.a + (se.b - se.a) * u[:j]
                q = sp.a + (sp.b - sp.a) * u[j:]
                return np.concatenate([e, 1j * q]).astype(complex)

            for _ in range(n_starts):
                p0 = rng.uniform(0.0, 1.0, k_total)
                res = minimize(lambda p: grid_obj(decode(p)), p0, method="Nelder-Mead",
                               bounds=[(0.0, 1.0)] * k_total,
                               options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 2000 * k_total})
                if res.fun < best_val:
                    best_val, best_roots = res.fun, decode(res.x)
    return _union_max(best_roots, window), best_roots


def conjecture_probe(windows, k_total, n_starts=50, seed=0, free_roots=False):
    """How close the best product split gets to balance, and to a joint-minimax bound."""
    entries = []
    for w in windows:
        if _degenerate(w):
            entries.append(ProbeEntry(w, 1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0 if free_roots else None))
            continue
        design, report = design_balanced(w, k_total)
        _, me, mp, _ = next(r for r in report.per_split if r[0] == report.chosen_l)
        prod = max(me, mp)
        gap = abs(me - mp) / prod if prod > 0 else 0.0
        bf = excess = free = None
        if k_total <= 4:
            bf, _ = brute_force_joint(w, k_total, n_starts, seed)
            excess = prod / bf - 1.0 if bf > 0 else 0.0
            if free_roots:
                free, _ = brute_force_joint(w, k_total, n_starts, seed, free_roots=True)
        entries.append(ProbeEntry(w, report.chosen_l, me, mp, gap, prod, bf, excess, free))
    return entries


def _degenerate(w):
    return w.lambda2 == w.lambda3 and w.lambda1 == -1.0
