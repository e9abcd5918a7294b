"""Rectangular grids in C^n and discretized weighted holomorphic fields."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .csymplectic import QuadraticWeight

trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy 1.x/2.x compat


class GridError(ValueError):
    """Grid too coarse or too small for the requested operation."""


@dataclass
class Grid:
    """Rectangular lattice in C^n described per real axis.

    Axes are ordered (Re x1, Im x1, Re x2, Im x2).  ``steps`` counts nodes
    per axis; integration uses trapezoid weights.
    """

    mins: np.ndarray
    maxs: np.ndarray
    steps: np.ndarray

    def __post_init__(self):
        self.mins = np.asarray(self.mins, dtype=float)
        self.maxs = np.asarray(self.maxs, dtype=float)
        self.steps = np.asarray(self.steps, dtype=int)
        if not (self.mins.size == self.maxs.size == self.steps.size):
            raise ValueError("mins, maxs, steps must have equal length")
        if self.mins.size % 2:
            raise ValueError("need two real axes per complex dimension")
        if np.any(self.steps < 2) or np.any(self.maxs <= self.mins):
            raise ValueError("axes need at least 2 nodes and positive extent")

    @property
    def n(self) -> int:
        return self.mins.size // 2

    @property
    def shape(self):
        return tuple(int(s) for s in self.steps)

    @property
    def npoints(self) -> int:
        return int(np.prod(self.steps))

    @property
    def spacings(self) -> np.ndarray:
        return (self.maxs - self.mins) / (self.steps - 1)

    def axis(self, k: int) -> np.ndarray:
        return np.linspace(self.mins[k], self.maxs[k], self.steps[k])

    def complex_meshes(self):
        """Complex coordinate arrays, one per complex dimension, grid-shaped."""
        axes = [self.axis(k) for k in range(2 * self.n)]
        mesh = np.meshgrid(*axes, indexing="ij")
        return tuple(mesh[2 * j] + 1j * mesh[2 * j + 1] for j in range(self.n))

    def points(self) -> np.ndarray:
        """Flattened complex points, shape (npoints, n)."""
        meshes = self.complex_meshes()
        return np.stack([m.ravel() for m in meshes], axis=-1)

    def weights(self) -> np.ndarray:
        """Flattened trapezoid quadrature weights for the Lebesgue measure."""
        ws = []
        for k in range(2 * self.n):
            d = self.spacings[k]
            w = np.full(self.steps[k], d)
            w[0] = w[-1] = d / 2.0
            ws.append(w)
        total = ws[0]
        for w in ws[1:]:
            total = np.multiply.outer(total, w)
        return total.ravel()

    def require_resolves(self, h: float, factor: float = 3.0):
        """Nyquist-style check: spacings must not exceed sqrt(h)/factor."""
        lim = np.sqrt(h) / factor
        if np.any(self.spacings > lim + 1e-15):
            raise GridError(
                "grid spacing %.4g too coarse for h = %g (limit %.4g)"
                % (float(np.max(self.spacings)), h, lim)
            )

    def interior_mask(self, margin: float) -> np.ndarray:
        """Flat boolean mask of points at least ``margin`` from every edge."""
        axes_masks = []
        for k in range(2 * self.n):
            ax = self.axis(k)
            axes_masks.append((ax >= self.mins[k] + margin) & (ax <= self.maxs[k] - margin))
        total = axes_masks[0]
        for m in axes_masks[1:]:
            total = np.logical_and.outer(total, m)
        return total.ravel()

    def to_json(self):
        return {
            "min": [float(v) for v in self.mins],
            "max": [float(v) for v in self.maxs],
            "steps": [int(v) for v in self.steps],
        }

    @classmethod
    def from_json(cls, obj):
        return cls(np.array(obj["min"]), np.array(obj["max"]), np.array(obj["steps"]))


def grid_for_weight(h: float, re_halfwidth: float = 6.0, im_halfwidth: Optional[float] = None,
                    spacing: Optional[float] = None, center: complex = 0.0) -> Grid:
    """Default n = 1 grid: O(1) real extent, O(sqrt h) imaginary extent.

    Kernels in play are Gaussians of variance ~ h, hence the default
    spacing sqrt(h)/6.
    """
    spacing = spacing if spacing is not None else np.sqrt(h) / 6.0
    im_halfwidth = im_halfwidth if im_halfwidth is not None else max(1.0, 8.0 * np.sqrt(h))
    n_re = int(np.ceil(2 * re_halfwidth / spacing)) + 1
    n_im = int(np.ceil(2 * im_halfwidth / spacing)) + 1
    u0, v0 = np.real(center), np.imag(center)
    return Grid(
        np.array([u0 - re_halfwidth, v0 - im_halfwidth]),
        np.array([u0 + re_halfwidth, v0 + im_halfwidth]),
        np.array([n_re, n_im]),
    )


def square_grid(h: float, halfwidth: float, spacing: Optional[float] = None) -> Grid:
    spacing = spacing if spacing is not None else np.sqrt(h) / 6.0
    n = int(np.ceil(2 * halfwidth / spacing)) + 1
    return Grid(np.array([-halfwidth, -halfwidth]), np.array([halfwidth, halfwidth]), np.array([n, n]))


@dataclass
class HoloSample:
    """Discretized element of H_Phi: grid, values, attached weight and h."""

    grid: Grid
    h: float
    weight: QuadraticWeight
    values: np.ndarray
    weight_values: Optional[np.ndarray] = None  # precomputed Phi on the grid (deformed weights)

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).ravel()
        if self.values.size != self.grid.npoints:
            raise ValueError("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("values must be finite")

    def phi_at_points(self) -> np.ndarray:
        if self.weight_values is not None:
            return self.weight_values
        return self.weight.value(self.grid.points())

    def weighted_density(self) -> np.ndarray:
        """|v|^2 e^{-2 Phi / h} at the nodes."""
        return np.abs(self.values) ** 2 * np.exp(-2.0 * self.phi_at_points() / self.h)

    def copy_with(self, values: np.ndarray) -> "HoloSample":
        return HoloSample(self.grid, self.h, self.weight, values, self.weight_values)

    def to_json(self):
        vals = np.stack([np.real(self.values), np.imag(self.values)], axis=-1)
        return {
            "n": self.grid.n,
            "h": float(self.h),
            "weight": {
                "P": _cmat_to_json(self.weight.P),
                "L": _cmat_to_json(self.weight.L),
            },
            "grid": self.grid.to_json(),
            "values": vals.tolist(),
        }

    @classmethod
    def from_json(cls, obj) -> "HoloSample":
        grid = Grid.from_json(obj["grid"])
        weight = QuadraticWeight(_cmat_from_json(obj["weight"]["P"]), _cmat_from_json(obj["weight"]["L"]))
        vals = np.asarray(obj["values"], dtype=float)
        values = vals[..., 0] + 1j * vals[..., 1]
        return cls(grid, float(obj["h"]), weight, values)


def _cmat_to_json(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(np.real(v)), float(np.imag(v))] for v in row] for row in m]


def _cmat_from_json(rows):
    return np.array([[complex(v[0], v[1]) for v in row] for row in rows])


@dataclass
class RealSamples:
    """Function samples on a 1-D real grid."""

    ys: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.ys = np.asarray(self.ys, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)

    @property
    def spacing(self) -> float:
        return float(self.ys[1] - self.ys[0])

    def l2_norm(self) -> float:
        return float(np.sqrt(trapezoid(np.abs(self.values) ** 2, self.ys)))

    def inner(self, other: "RealSamples") -> complex:
        return complex(trapezoid(self.values * np.conj(other.values), self.ys))
