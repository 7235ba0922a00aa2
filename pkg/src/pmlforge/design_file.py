"""JSON design files (schema version 1).

Polynomials are stored by their roots; complex numbers as ``[re, im]``
pairs.  Python's float repr is the shortest string that round-trips, so
``load(save(d))`` is bit-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .composite_layer import Achieved, LayerDesign, SpectralWindow
from .grid_synthesis import FDGrid, FEMesh
from .poly_rational import Polynomial

SCHEMA_VERSION = 1


class DesignFileError(ValueError):
    pass


def pairs(values):
    return [[float(z.real), float(z.imag)] for z in np.asarray(values, dtype=complex).ravel()]


def unpairs(data, name="value"):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError) as exc:
        raise DesignFileError(f"{name}: expected a list of [re, im] pairs") from exc
    if arr.size == 0:
        return np.zeros(0, dtype=complex)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DesignFileError(f"{name}: expected a list of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


@dataclass
class DesignFile:
    window: dict
    k_total: int
    split_l: int
    tail_power: int
    t_e: list
    t_p: list
    h2: list
    fe_lengths: list
    fd_hhat: list
    fd_h: list
    fd_terminal_unbounded: bool
    achieved: dict
    balanced: bool | None = None
    per_split: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    @classmethod
    def from_design(cls, design, report=None):
        a = design.achieved
        return cls(
            window={
                "lambda1": design.window.lambda1,
                "lambda2": design.window.lambda2,
                "lambda3": design.window.lambda3,
            },
            k_total=design.k_total,
            split_l=design.split_l,
            tail_power=design.tail_power,
            t_e=pairs(design.t_e.roots),
            t_p=pairs(design.t_p.roots),
            h2=pairs(design.h2.roots),
            fe_lengths=pairs(design.fe_segment.lengths),
            fd_hhat=pairs(design.fd_tail.hhat),
            fd_h=pairs(design.fd_tail.h),
            fd_terminal_unbounded=bool(design.fd_tail.terminal_unbounded),
            achieved={
                "max_reflection_evanescent": a.max_reflection_evanescent,
                "max_reflection_propagative": a.max_reflection_propagative,
                "max_ntd_rel_error_evanescent": a.max_ntd_rel_error_evanescent,
                "max_ntd_rel_error_propagative": a.max_ntd_rel_error_propagative,
            } if a else {},
            balanced=None if report is None else bool(report.balanced),
            per_split=[] if report is None else [list(map(float, row)) for row in report.per_split],
        )

    def to_dict(self):
        return {
            "schema_version": self.schema_version,
            "window": self.window,
            "k_total": self.k_total,
            "split_l": self.split_l,
            "tail_power": self.tail_power,
            "balanced": self.balanced,
            "t_e": self.t_e,
            "t_p": self.t_p,
            "h2": self.h2,
            "fe_lengths": self.fe_lengths,
            "fd_hhat": self.fd_hhat,
            "fd_h": self.fd_h,
            "fd_terminal_unbounded": self.fd_terminal_unbounded,
            "achieved": self.achieved,
            "per_split": self.per_split,
        }

    @classmethod
    def from_dict(cls, d):
        if not isinstance(d, dict):
            raise DesignFileError("design file must hold a JSON object")
        if d.get("schema_version") != SCHEMA_VERSION:
            raise DesignFileError(f"unsupported schema_version {d.get('schema_version')!r}")
        required = ["window", "k_total", "split_l", "t_e", "t_p", "h2",
                    "fe_lengths", "fd_hhat", "fd_h"]
        missing = [k for k in required if k not in d]
        if missing:
            raise DesignFileError(f"missing keys: {', '.join(missing)}")
        for key in ("t_e", "t_p", "h2", "fe_lengths", "fd_hhat", "fd_h"):
            unpairs(d[key], key)
        w = d["window"]
        if not all(k in w for k in ("lambda1", "lambda2", "lambda3")):
            raise DesignFileError("window needs lambda1, lambda2, lambda3")
        return cls(
            window=w,
            k_total=int(d["k_total"]),
            split_l=int(d["split_l"]),
            tail_power=int(d.get("tail_power", 2)),
            t_e=d["t_e"], t_p=d["t_p"], h2=d["h2"],
            fe_lengths=d["fe_lengths"], fd_hhat=d["fd_hhat"], fd_h=d["fd_h"],
            fd_terminal_unbounded=bool(d.get("fd_terminal_unbounded", False)),
            achieved=d.get("achieved", {}),
            balanced=d.get("balanced"),
            per_split=d.get("per_split", []),
        )

    def to_design(self):
        """Rebuild a :class:`LayerDesign`; coefficients are derived from the roots."""
        try:
            window = SpectralWindow(
                float(self.window["lambda1"]), float(self.window["lambda2"]), float(self.window["lambda3"])
            )
            t_e = Polynomial.from_unit_roots(unpairs(self.t_e, "t_e"))
            t_p = Polynomial.from_unit_roots(unpairs(self.t_p, "t_p"))
            h2 = Polynomial.from_unit_roots(unpairs(self.h2, "h2"))
            mesh = FEMesh(unpairs(self.fe_lengths, "fe_lengths"))
            grid = FDGrid(unpairs(self.fd_hhat, "fd_hhat"), unpairs(self.fd_h, "fd_h"),
                          self.fd_terminal_unbounded)
        except DesignFileError:
            raise
        except ValueError as exc:
            raise DesignFileError(str(exc)) from exc
        a = self.achieved
        achieved = Achieved(
            a["max_reflection_evanescent"], a["max_reflection_propagative"],
            a["max_ntd_rel_error_evanescent"], a["max_ntd_rel_error_propagative"],
        ) if a else None
        return LayerDesign(window, self.k_total, self.split_l, t_e, t_p, h2, mesh, grid,
                           achieved, self.tail_power)


def save(design_file, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(design_file.to_dict(), fh, indent=2)
        fh.write("\n")


def load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DesignFileError(f"cannot read design file {path}: {exc}") from exc
    return DesignFile.from_dict(data)
