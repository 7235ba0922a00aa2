"""Complex polynomials and odd/even rational functions.

A :class:`Polynomial` carries ascending monomial coefficients and, when it
was built from its zeros, the root list as well.  Root form is used for
evaluation whenever it is available: reflection coefficients are evaluated
right next to their interpolation nodes, where the expanded coefficient form
suffers catastrophic cancellation.

Sign convention for the discrete hyperbolic tangent: with
``exp(s) ~ t(-s)/t(s)`` we use

    tanh(s/2) ~ (t(-s) - t(s)) / (t(s) + t(-s)),

which gives ``s/2 + O(s^3)`` for ``t = 1 - s/2``.  Every odd/even identity
in the package follows from it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DegenerateError, DegreeError, PoleError

MAX_DEGREE = 40
POLE_FLOOR = 1e-300


def principal_sqrt(lam):
    """Square root with the cut on the negative axis approached from above.

    Negative reals map to ``+i*sqrt(|lam|)`` even when the input carries a
    signed-zero imaginary part.
    """
    lam = np.asarray(lam, dtype=complex)
    lam = lam.real + 1j * np.where(lam.imag == 0, 0.0, lam.imag)
    out = np.sqrt(lam)
    return out[()] if out.ndim == 0 else out


def _as_coeffs(coeffs):
    c = np.atleast_1d(np.asarray(coeffs, dtype=complex)).copy()
    if c.size == 0:
        return np.zeros(1, dtype=complex)
    nz = np.flatnonzero(c)
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


@dataclass(frozen=True, eq=False)
class Polynomial:
    """Complex polynomial in the monomial basis, ascending degree.

    ``roots``/``lead`` are optional; when present the polynomial equals
    ``lead * prod(s - roots)`` and that form is used for evaluation.
    """

    coeffs: np.ndarray
    roots: np.ndarray | None = None
    lead: complex | None = None

    def __post_init__(self):
        c = _as_coeffs(self.coeffs)
        if c.size - 1 > MAX_DEGREE:
            raise DegreeError(f"degree {c.size - 1} exceeds cap {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", c)
        if self.roots is not None:
            r = np.atleast_1d(np.asarray(self.roots, dtype=complex)).copy()
            object.__setattr__(self, "roots", r)
            object.__setattr__(self, "lead", complex(self.lead))

    @classmethod
    def from_roots(cls, roots, lead=1.0):
        """``lead * prod(s - r)``."""
        roots = np.atleast_1d(np.asarray(roots, dtype=complex))
        if roots.size > MAX_DEGREE:
            raise DegreeError(f"degree {roots.size} exceeds cap {MAX_DEGREE}")
        if lead == 0:
            return cls(np.zeros(1))
        coeffs = lead * npoly.polyfromroots(roots) if roots.size else np.array([lead])
        return cls(coeffs, roots=roots, lead=lead)

    @classmethod
    def from_unit_roots(cls, roots):
        """``prod(1 - s/r)``, normalized to ``t(0) = 1``."""
        roots = np.atleast_1d(np.asarray(roots, dtype=complex))
        if np.any(roots == 0):
            raise ValueError("a zero root cannot be unit-normalized")
        lead = np.prod(-1.0 / roots) if roots.size else 1.0
        return cls.from_roots(roots, lead)

    @property
    def degree(self):
        return self.coeffs.size - 1

    @property
    def is_zero(self):
        return self.coeffs.size == 1 and self.coeffs[0] == 0

    def __call__(self, s):
        return evaluate(self, s)

    def reflect(self):
        """The polynomial ``s -> p(-s)``."""
        signs = (-1.0) ** np.arange(self.coeffs.size)
        if self.roots is None:
            return Polynomial(self.coeffs * signs)
        lead = self.lead * (-1.0) ** self.roots.size
        return Polynomial(self.coeffs * signs, roots=-self.roots, lead=lead)

    def __mul__(self, other):
        if isinstance(other, Polynomial):
            coeffs = npoly.polymul(self.coeffs, other.coeffs)
            if self.roots is not None and other.roots is not None:
                return Polynomial(
                    coeffs,
                    roots=np.concatenate([self.roots, other.roots]),
                    lead=self.lead * other.lead,
                )
            return Polynomial(coeffs)
        other = complex(other)
        if self.roots is not None:
            return Polynomial(self.coeffs * other, roots=self.roots, lead=self.lead * other)
        return Polynomial(self.coeffs * other)

    __rmul__ = __mul__

    def __pow__(self, n):
        out = Polynomial.from_roots([], 1.0)
        for _ in range(int(n)):
            out = out * self
        return out

    def monic(self):
        lc = self.coeffs[-1]
        if lc == 0:
            return self
        return self * (1.0 / lc)

    def find_roots(self):
        """Roots, from storage when known, else companion matrix plus one Newton step."""
        if self.roots is not None:
            return self.roots.copy()
        roots = merge_clusters(self.coeffs, np.roots(self.coeffs[::-1]))
        return polish_roots(self.coeffs, roots)


def merge_clusters(coeffs, roots, rtol=1e-4):
    """Replace a split multiple root by its cluster mean.

    A root of multiplicity ``m`` comes out of the companion matrix spread
    over a circle of radius ``~eps**(1/m)``; the mean of the cluster is
    accurate to near machine precision.  The merge is kept only if the
    residual at the mean is no worse than at the scattered roots, which
    leaves genuinely distinct close roots alone.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    out = np.array(roots, dtype=complex)
    free = list(range(out.size))
    while free:
        i = free.pop(0)
        near = [j for j in free if abs(out[j] - out[i]) <= rtol * max(abs(out[i]), 1.0)]
        if not near:
            continue
        group = [i] + near
        mean = out[group].mean()
        worst = max(abs(npoly.polyval(out[j], coeffs)) for j in group)
        if abs(npoly.polyval(mean, coeffs)) <= 10 * len(group) * worst:
            out[group] = mean
            free = [j for j in free if j not in near]
    return out


def polish_roots(coeffs, roots):
    """One Newton correction per root; keeps a root if the step makes it worse."""
    coeffs = np.asarray(coeffs, dtype=complex)
    d = npoly.polyder(coeffs)
    out = np.array(roots, dtype=complex)
    for i, r in enumerate(out):
        f = npoly.polyval(r, coeffs)
        fp = npoly.polyval(r, d)
        if fp != 0:
            cand = r - f / fp
            if abs(npoly.polyval(cand, coeffs)) <= abs(f):
                out[i] = cand
    return out


def evaluate(poly, s):
    """Horner in coefficient form; root product when roots are stored."""
    s = np.asarray(s, dtype=complex)
    if poly.roots is not None:
        if poly.roots.size == 0:
            out = np.full(s.shape, poly.lead, dtype=complex)
        else:
            out = poly.lead * np.prod(s[..., None] - poly.roots, axis=-1)
    else:
        out = npoly.polyval(s, poly.coeffs)
    return out[()] if out.ndim == 0 else out


def reflection(h, s):
    """Reflection coefficient ``h(s)/h(-s)``."""
    s = np.asarray(s, dtype=complex)
    den = evaluate(h, -s)
    if np.any(np.abs(den) < POLE_FLOOR):
        raise PoleError("h(-s) vanishes at the sample")
    if h.roots is not None and h.roots.size:
        # lead cancels; product of per-root ratios avoids over/underflow
        out = np.prod((s[..., None] - h.roots) / (-s[..., None] - h.roots), axis=-1)
        return out[()] if out.ndim == 0 else out
    return evaluate(h, s) / den


def newman_ntd(h, lam):
    """Rational NtD approximant ``R(lam) = [h(s)-h(-s)] / (s [h(s)+h(-s)])``."""
    s = principal_sqrt(lam)
    hp = evaluate(h, s)
    hm = evaluate(h, -s)
    den = s * (hp + hm)
    if np.any(np.abs(den) < POLE_FLOOR):
        raise PoleError("Newman denominator vanishes at the sample")
    return (hp - hm) / den


@dataclass(frozen=True, eq=False)
class OddEvenRational:
    """``f(s) = s * p_tilde(s^2) / q_tilde(s^2)`` with ``deg q_tilde = k``."""

    p_tilde: Polynomial
    q_tilde: Polynomial

    @property
    def k(self):
        return self.q_tilde.degree

    def __call__(self, s):
        s = np.asarray(s, dtype=complex)
        lam = s * s
        return s * evaluate(self.p_tilde, lam) / evaluate(self.q_tilde, lam)


def split_odd_even(t):
    """Split ``t`` (even degree ``2k``) into ``(p_tilde, q_tilde)``.

    ``s p_tilde(s^2) = t(-s) - t(s)`` and ``q_tilde(s^2) = t(s) + t(-s)``.
    """
    if t.degree % 2:
        raise ValueError(f"split_odd_even needs even degree, got {t.degree}")
    c = t.coeffs
    k = t.degree // 2
    q = 2.0 * c[0::2]
    p = -2.0 * c[1::2] if k > 0 else np.zeros(1)
    return OddEvenRational(Polynomial(p), Polynomial(q[: k + 1]))


def _shares_root(p, q, rtol=1e-9):
    if p.is_zero or p.degree < 1 or q.degree < 1:
        return False
    rp = np.roots(p.coeffs[::-1])
    rq = np.roots(q.coeffs[::-1])
    scale = max(np.max(np.abs(rq)), 1e-300)
    return bool(np.min(np.abs(rp[:, None] - rq[None, :])) < rtol * scale)


def combine_odd_even(r):
    """Inverse of :func:`split_odd_even`; ``t(0) = q_tilde(0)/2``."""
    k = r.q_tilde.degree
    p = r.p_tilde.coeffs
    if not r.p_tilde.is_zero and r.p_tilde.degree > k - 1:
        raise ValueError("deg p_tilde must not exceed deg q_tilde - 1")
    if _shares_root(r.p_tilde, r.q_tilde):
        raise DegenerateError("p_tilde and q_tilde share a common factor")
    c = np.zeros(2 * k + 1, dtype=complex)
    c[0::2] = r.q_tilde.coeffs / 2.0
    if not r.p_tilde.is_zero:
        c[1 : 2 * p.size : 2] = -p / 2.0
    return Polynomial(c)
