"""Exterior absorbing layer: an FE segment followed by a Dirichlet-terminated FD tail.

The segment carries ``t_e`` (roots on the evanescent segment) as one
element per root, so its round trip contributes ``(t_e(s)/t_e(-s))^2``.
The tail is a one-sided staggered grid whose reflection is
``h2(s)/h2(-s)`` with ``h2 = t_p**tail_power``.  The whole layer then has
``h = t_e^2 h2`` and reflection equal to the product of the two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import zolotarev
from .grid_synthesis import FDGrid, FEMesh, fd_response, fe_to_fd, mesh_from_polynomial, rational_to_grid
from .poly_rational import Polynomial, combine_odd_even, reflection, split_odd_even
from .wave_maps import element_propagator, halfspace_error_sweep, spectral_reflection

N_MEASURE = 2001


@dataclass(frozen=True)
class SpectralWindow:
    """Propagative ``[-1, lambda1]`` and evanescent ``[lambda2, lambda3]`` windows."""

    lambda1: float
    lambda2: float
    lambda3: float

    def __post_init__(self):
        if not -1.0 <= self.lambda1 < 0.0:
            raise ValueError("lambda1 must lie in [-1, 0)")
        if not 0.0 < self.lambda2 <= self.lambda3:
            raise ValueError("need 0 < lambda2 <= lambda3")

    @property
    def evanescent(self):
        return zolotarev.Segment("real", math.sqrt(self.lambda2), math.sqrt(self.lambda3))

    @property
    def propagative(self):
        return zolotarev.Segment("imaginary", math.sqrt(-self.lambda1), 1.0)


@dataclass(frozen=True)
class Achieved:
    max_reflection_evanescent: float
    max_reflection_propagative: float
    max_ntd_rel_error_evanescent: float
    max_ntd_rel_error_propagative: float


@dataclass(frozen=True, eq=False)
class LayerDesign:
    window: SpectralWindow
    k_total: int
    split_l: int
    t_e: Polynomial
    t_p: Polynomial
    h2: Polynomial
    fe_segment: FEMesh
    fd_tail: FDGrid
    achieved: Achieved | None = None
    tail_power: int = 2
    max_ratio_e: float = float("nan")
    max_ratio_p: float = float("nan")

    @property
    def h(self):
        """``t_e^2 h2`` in root form."""
        return self.t_e * self.t_e * self.h2

    def reflection(self, s):
        return reflection(self.h, s)


def compose_reflection(r1, r2):
    """Reflection behind a segment with one-way factor ``r1 = t1(s)/t1(-s)``."""
    return r1 * r1 * r2


def tail_from_fk(f):
    """Monic ``h2`` with ``(h2(-s) - h2(s))/(h2(s) + h2(-s)) = f(s)``."""
    if f.p_tilde.is_zero:
        return Polynomial([1.0])
    return combine_odd_even(f).monic()


def tail_grid(h2):
    """One-sided staggered tail whose reflection is ``h2(s)/h2(-s)``."""
    if h2.degree == 0:
        return FDGrid([], [], terminal_unbounded=True)
    return rational_to_grid(split_odd_even(Polynomial(h2.coeffs)))


def measure(design, n_samples=N_MEASURE):
    sweep = halfspace_error_sweep(design.h, design.window, n_samples)
    ev, pr = sweep.maxima["evanescent"], sweep.maxima["propagative"]
    return Achieved(ev["reflection"], pr["reflection"], ev["rel_error"], pr["rel_error"])


def build_composite(window, k_total, split_l, tail_power=2):
    """Product construction for a given split of the degree budget."""
    if not 1 <= split_l <= k_total - 1:
        raise ValueError(f"split_l must lie in [1, k_total - 1], got {split_l}")
    if tail_power not in (1, 2):
        raise ValueError("tail_power must be 1 or 2")
    k_p = k_total - split_l
    if tail_power == 1 and k_p % 2:
        raise ValueError("tail_power=1 needs an even propagative degree")
    se, sp = window.evanescent, window.propagative
    sol_e = zolotarev.solve_real(se.a, se.b, split_l)
    sol_p = zolotarev.solve_imaginary(sp.a, sp.b, k_p)
    t_e, t_p = sol_e.t, sol_p.t
    h2 = t_p**tail_power
    design = LayerDesign(
        window=window,
        k_total=k_total,
        split_l=split_l,
        t_e=t_e,
        t_p=t_p,
        h2=h2,
        fe_segment=mesh_from_polynomial(t_e),
        fd_tail=tail_grid(h2),
        tail_power=tail_power,
        max_ratio_e=sol_e.max_ratio,
        max_ratio_p=sol_p.max_ratio,
    )
    return _with_achieved(design)


def _with_achieved(design):
    return replace(design, achieved=measure(design))


@dataclass(frozen=True, eq=False)
class AssembledLayer:
    """Elements of the FE segment (interior side first), then the FD tail."""

    fe_lengths: np.ndarray
    tail: FDGrid
    segment_fd: FDGrid | None = field(default=None)

    @property
    def element_count(self):
        return self.fe_lengths.size

    @property
    def tail_pairs(self):
        return self.tail.k

    def boundary_pair(self, s):
        """``(u, v)`` at the interior face, for the tail's Dirichlet solution."""
        s = complex(s)
        w = np.array([-fd_response(self.tail, s), 1.0], dtype=complex)
        for length in self.fe_lengths[::-1]:
            w = np.linalg.solve(element_propagator(length, s), w)
            w = w / np.max(np.abs(w))
        return w

    def reflection(self, s):
        return spectral_reflection(self.boundary_pair(s))

    def ntd(self, s):
        """``u/u_x = u/(s v)`` at the interior face."""
        u, v = self.boundary_pair(s)
        return u / (complex(s) * v)


def assemble_full_grid(design):
    segment_fd = fe_to_fd(design.fe_segment) if design.fe_segment.n % 2 == 0 else None
    return AssembledLayer(design.fe_segment.lengths.copy(), design.fd_tail, segment_fd)

