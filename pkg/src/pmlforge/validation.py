"""Invariant checks run against a (possibly hand-edited) design."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import zolotarev
from .composite_layer import AssembledLayer, tail_grid
from .errors import PMLForgeError
from .grid_synthesis import FEMesh, fd_response, fe_to_fd, grid_to_rational, mesh_from_polynomial, rational_to_grid
from .poly_rational import newman_ntd, reflection
from .wave_maps import discrete_ntd_fd, discrete_ntd_fe, element_propagator

N_PROBE = 64


@dataclass
class GroupResult:
    name: str
    passed: bool
    detail: str


def probe_points(n=N_PROBE, seed=0):
    """Random complex ``s`` with ``|s|`` log-uniform in ``[0.05, 5]``, right half-plane."""
    rng = np.random.default_rng(seed)
    mod = np.exp(rng.uniform(np.log(0.05), np.log(5.0), n))
    ang = rng.uniform(-0.45 * np.pi, 0.45 * np.pi, n)
    return mod * np.exp(1j * ang)


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def check_equioscillation(design):
    worst, notes = 0.0, []
    for name, t, seg in (("t_e", design.t_e, design.window.evanescent),
                         ("t_p", design.t_p, design.window.propagative)):
        k = t.degree
        if k == 0:
            continue
        roots = t.roots
        fn = lambda sig: zolotarev.ratio_abs(roots, seg.rotation * sig)  # noqa: E731
        measured = zolotarev.segment_maximum(fn, seg.a, seg.b)
        sol = zolotarev.MinimaxSolution(t, measured, [], seg)
        rep = zolotarev.equioscillation_check(sol, seg)
        ref = zolotarev.solve(seg, k).max_ratio
        dev = abs(measured - ref) / ref if ref > 0 else measured
        worst = max(worst, rep.spread, dev)
        if not rep.passed or dev > zolotarev.RIPPLE_RTOL:
            notes.append(f"{name}: spread {rep.spread:.2e}, excess over optimum {dev:.2e}")
    return GroupResult("equioscillation", not notes, "; ".join(notes) or f"max deviation {worst:.2e}")


def check_roundtrips(design, tol=1e-10):
    s = probe_points()
    notes = []
    ref_tail = tail_grid(design.h2)
    err_tail = _rel(fd_response(design.fd_tail, s), fd_response(ref_tail, s))
    if err_tail > tol:
        notes.append(f"stored tail steps vs h2: {err_tail:.2e}")
    if design.fd_tail.k:
        r = grid_to_rational(design.fd_tail)
        err_rt = _rel(fd_response(rational_to_grid(r), s), fd_response(design.fd_tail, s))
        if err_rt > tol:
            notes.append(f"tail grid->rational->grid: {err_rt:.2e}")
    if design.t_e.degree:
        expect = np.sort_complex(mesh_from_polynomial(design.t_e).lengths)
        got = np.sort_complex(design.fe_segment.lengths)
        if got.size != expect.size or _rel(got, expect) > 1e-8:
            notes.append("stored FE lengths do not match t_e roots")
    elif design.fe_segment.n:
        notes.append("FE lengths present without t_e")
    return GroupResult("roundtrips", not notes, "; ".join(notes) or "ok")


def _fe_fd_residual(mesh, s):
    grid = fe_to_fd(mesh)
    worst = 0.0
    for x in s:
        a, b = discrete_ntd_fe(mesh, x), discrete_ntd_fd(grid, x)
        worst = max(worst, float(np.max(np.abs(a - b)) / np.max(np.abs(a))))
    return worst


def check_fe_fd(design, tol=1e-10):
    s = probe_points()
    meshes = []
    if design.fe_segment.n and design.fe_segment.n % 2 == 0:
        meshes.append(("segment", design.fe_segment))
    if design.h2.degree and design.h2.degree % 2 == 0:
        meshes.append(("tail mesh", FEMesh(2.0 / design.h2.roots)))
    notes, worst = [], 0.0
    for name, mesh in meshes:
        res = _fe_fd_residual(mesh, s)
        worst = max(worst, res)
        if res > tol:
            notes.append(f"{name}: {res:.2e}")
    return GroupResult("fe_equals_fd", not notes, "; ".join(notes) or f"max residual {worst:.2e}")


def check_fixed_point(design, tol=1e-12):
    """The element chain keeps the directions ``(1, 1)`` and ``(1, -1)``.

    The off-direction component is measured relative to ``||G|| |d|^2``.
    """
    s = probe_points()
    worst = 0.0
    meshes = [m for m in (design.fe_segment,) if m.n]
    for mesh in meshes:
        for x in s:
            G = np.eye(2, dtype=complex)
            for length in mesh.lengths:
                G = element_propagator(length, x) @ G
            for d in (np.array([1.0, 1.0]), np.array([1.0, -1.0])):
                w = G @ d
                off = abs(w[0] * d[1] - w[1] * d[0]) / (np.linalg.norm(G, 2) * np.linalg.norm(d) ** 2)
                worst = max(worst, off)
    return GroupResult("fixed_point", worst <= tol, f"max off-direction {worst:.2e}")


def check_multiplicativity(design, tol=1e-10):
    s = probe_points()
    layer = AssembledLayer(design.fe_segment.lengths, design.fd_tail)
    chain = np.array([layer.reflection(x) for x in s])
    r1 = reflection(design.t_e, s) if design.t_e.degree else np.ones_like(s)
    r2 = reflection(design.h2, s) if design.h2.degree else np.ones_like(s)
    err = _rel(chain, r1 * r1 * r2)
    return GroupResult("multiplicativity", err <= tol, f"chain vs product {err:.2e}")


def check_node_exactness(design, tol=1e-10):
    h = design.h
    roots = h.roots
    if roots.size == 0:
        return GroupResult("node_exactness", True, "no nodes")
    refl = np.abs(reflection(h, roots))
    on_seg = roots[(roots.real > 0) | ((roots.real == 0) & (roots.imag > 0))]
    ntd = newman_ntd(h, on_seg**2)
    err = _rel(ntd, -1.0 / on_seg) if on_seg.size else 0.0
    worst = max(float(np.max(refl)), err)
    return GroupResult("node_exactness", worst <= tol, f"max |r| at nodes {np.max(refl):.2e}, NtD {err:.2e}")


CHECKS = (
    check_equioscillation,
    check_roundtrips,
    check_fe_fd,
    check_fixed_point,
    check_multiplicativity,
    check_node_exactness,
)


def validate_design(design):
    results = []
    for check in CHECKS:
        name = check.__name__.replace("check_", "")
        try:
            results.append(check(design))
        except (PMLForgeError, ValueError, np.linalg.LinAlgError) as exc:
            results.append(GroupResult(name, False, f"error: {exc}"))
    return results

