"""Discretized FBI transform, adjoint, weighted norms, Bergman projection,
and the complex-domain Fourier pair along good contours.

Everything here is n = 1; kernels are Gaussians of variance ~ h and all
quadratures are trapezoid (or composite Simpson on the oscillatory
Fourier-pair legs).  No adaptive schemes.
"""

from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .csymplectic import QuadraticWeight
from .distributions import TestDistribution
from .grids import Grid, GridError, HoloSample, RealSamples
from .phase import FBIPhase, legendre_critical_point, legendre_weight, polarization, unitarity_constant, weight_from_phase

_CHUNK = 256


def fbi_transform_points(u: TestDistribution, phase: FBIPhase, h: float, points):
    """T u at arbitrary complex points (closed form / dense quadrature)."""
    return u.transform(phase, h, np.asarray(points, dtype=complex))


def fbi_forward(u, phase: FBIPhase, h: float, grid: Grid, check_resolution: bool = True) -> HoloSample:
    """Forward transform onto a grid; ``u`` is a TestDistribution or RealSamples."""
    if grid.n != 1:
        raise NotImplementedError("grid transforms are implemented for n = 1")
    if check_resolution:
        grid.require_resolves(h)
    weight, _, _ = weight_from_phase(phase)
    x = grid.points()[:, 0]
    if isinstance(u, TestDistribution):
        values = u.transform(phase, h, x)
    elif isinstance(u, RealSamples):
        values = _forward_sampled(u, phase, h, x)
    else:
        raise TypeError("u must be a TestDistribution or RealSamples")
    return HoloSample(grid, h, weight, values)


def _forward_sampled(u: RealSamples, phase: FBIPhase, h: float, x) -> np.ndarray:
    c = unitarity_constant(phase)
    ys = u.ys
    w = np.full(ys.size, u.spacing)
    w[0] = w[-1] = u.spacing / 2.0
    out = np.empty(x.size, dtype=complex)
    for i in range(0, x.size, _CHUNK):
        xx = x[i : i + _CHUNK, None]
        ker = np.exp(1j * phase.value(xx[..., None], ys[None, :, None]) / h)
        out[i : i + _CHUNK] = ker @ (w * u.values)
    return c * h ** -0.75 * out


def fbi_adjoint(v: HoloSample, phase: FBIPhase, ys) -> RealSamples:
    """T* v on a real grid: quadrature of conj(kernel) v e^{-2 Phi/h} over C."""
    weight, _, _ = weight_from_phase(phase)
    if np.linalg.norm(weight.to_real_form() - v.weight.to_real_form()) > 1e-8:
        raise ValueError("sample weight does not match the phase weight")
    h = v.h
    c = unitarity_constant(phase)
    x = v.grid.points()[:, 0]
    dens = v.grid.weights() * v.values * np.exp(-2.0 * v.phi_at_points() / h)
    ys = np.asarray(ys, dtype=float)
    out = np.empty(ys.size, dtype=complex)
    for j in range(0, ys.size, _CHUNK):
        yy = ys[j : j + _CHUNK, None]
        ker = np.exp(1j * phase.value(x[None, :, None], yy[..., None]) / h)
        out[j : j + _CHUNK] = np.conj(ker) @ dens
    return RealSamples(ys, c * h ** -0.75 * out)


def hphi_norm(v: HoloSample) -> float:
    """L^2(C, e^{-2 Phi/h}) norm by trapezoid sum."""
    return float(np.sqrt(np.sum(v.grid.weights() * v.weighted_density())))


def hphi_inner(v: HoloSample, w: HoloSample) -> complex:
    if v.grid is not w.grid and v.grid.to_json() != w.grid.to_json():
        raise ValueError("samples live on different grids")
    dens = v.values * np.conj(w.values) * np.exp(-2.0 * v.phi_at_points() / v.h)
    return complex(np.sum(v.grid.weights() * dens))


# ---------------------------------------------------------------------------
# Bergman projection


def _bergman_margin(weight: QuadraticWeight, h: float) -> float:
    lam = float(np.min(np.linalg.eigvalsh(weight.L)))
    if lam <= 0:
        raise ValueError("Bergman projection needs a strictly psh weight")
    return 8.0 * np.sqrt(h / (2.0 * lam))


def bergman_project(v: HoloSample, out_mask: Optional[np.ndarray] = None) -> HoloSample:
    """Orthogonal projection onto holomorphic functions, kernel-quadrature form.

    Output values are computed at ``out_mask`` points (default: all); points
    closer than one kernel width to the boundary see a truncated kernel, so
    comparisons should be restricted to the interior.
    """
    grid, h, weight = v.grid, v.h, v.weight
    if grid.n != 1:
        raise NotImplementedError("Bergman quadrature is n = 1")
    margin = _bergman_margin(weight, h)
    if np.any((grid.maxs - grid.mins) < 2.5 * margin):
        raise GridError("grid coverage insufficient for the kernel width %.3g" % margin)
    p = complex(weight.P[0, 0])
    lev = float(np.real(weight.L[0, 0]))
    y = grid.points()[:, 0]
    phi_y = v.phi_at_points()
    dens = grid.weights() * v.values * np.exp(-2.0 * phi_y / h)
    x = y if out_mask is None else y[out_mask]
    out = np.empty(x.size, dtype=complex)
    pref = 2.0 * lev / (np.pi * h)
    for i in range(0, x.size, _CHUNK):
        xx = x[i : i + _CHUNK, None]
        expo = (p * xx**2 / 2.0 + lev * xx * np.conj(y)[None, :] + np.conj(p) * np.conj(y)[None, :] ** 2 / 2.0) * (2.0 / h)
        out[i : i + _CHUNK] = np.exp(expo) @ dens
    if out_mask is None:
        return v.copy_with(pref * out)
    full = v.values.copy()
    full[out_mask] = pref * out
    return v.copy_with(full)


def bergman_matrix(grid: Grid, weight: QuadraticWeight, h: float) -> np.ndarray:
    """Dense matrix of the projection on the grid (small grids only)."""
    if grid.npoints > 6000:
        raise ValueError("dense Bergman matrix requested on a large grid")
    p = complex(weight.P[0, 0])
    lev = float(np.real(weight.L[0, 0]))
    y = grid.points()[:, 0]
    phi_y = weight.value(grid.points())
    w = grid.weights()
    expo = (p * y[:, None] ** 2 / 2.0 + lev * y[:, None] * np.conj(y)[None, :] + np.conj(p) * np.conj(y)[None, :] ** 2 / 2.0) * (2.0 / h)
    expo = expo - 2.0 * phi_y[None, :] / h
    return (2.0 * lev / (np.pi * h)) * np.exp(expo) * w[None, :]


def bergman_reduced_kernel(weight: QuadraticWeight, h: float, x, y):
    """e^{-Phi(x)/h} K(x, y) e^{-Phi(y)/h} pointwise (for the Gaussian bound)."""
    pol = polarization(weight)
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    lev = float(np.real(weight.L[0, 0]))
    psi = pol.value(x[..., None], np.conj(y)[..., None])
    phi_x = weight.value(x[..., None])
    phi_y = weight.value(y[..., None])
    return (2.0 * lev / (np.pi * h)) * np.exp((2.0 * np.real(psi) - phi_x - phi_y) / h)


def fourier_inversion(v: HoloSample, contour_r: float, out_mask: Optional[np.ndarray] = None) -> HoloSample:
    """Mean-value inversion along the tilted contour with tilt constant R.

    Reproduces holomorphic fields for every sufficiently large R; the result
    is R-independent by Stokes.
    """
    grid, h, weight = v.grid, v.h, v.weight
    y = grid.points()[:, 0]
    dens = grid.weights() * v.values
    x = y if out_mask is None else y[out_mask]
    out = np.empty(x.size, dtype=complex)
    for i in range(0, x.size, _CHUNK):
        xx = x[i : i + _CHUNK, None]
        diff = xx - y[None, :]
        expo = -contour_r * np.abs(diff) ** 2 / h + 2.0 * weight.grad(xx[..., None])[..., 0] * diff / h
        out[i : i + _CHUNK] = np.exp(expo) @ dens
    vals = contour_r / (np.pi * h) * out
    if out_mask is None:
        return v.copy_with(vals)
    full = v.values.copy()
    full[out_mask] = vals
    return v.copy_with(full)


# ---------------------------------------------------------------------------
# Complex Fourier pair along good contours (signature (n, n) weights, n = 1)


def negative_direction(q) -> complex:
    """Unit complex direction spanning the most negative axis of the form."""
    q = np.asarray(q, dtype=float)
    vals, vecs = np.linalg.eigh((q + q.T) / 2.0)
    if vals[0] >= 0:
        raise ValueError("form has no negative direction: no good affine contour")
    vec = vecs[:, 0]
    return complex(vec[0], vec[1])


def _simpson_weights(npts: int, step: float) -> np.ndarray:
    if npts % 2 == 0:
        raise ValueError("composite Simpson needs an odd node count")
    w = np.ones(npts)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * step / 3.0


def fourier_forward(u: Callable, q, h: float, xi, halfwidth: Optional[float] = None,
                    npts: int = 2001):
    """F u(xi) = int over the good contour through x(xi) of e^{-i x xi/h} u(x) dx."""
    q = np.asarray(q, dtype=float)
    d = negative_direction(q)
    halfwidth = halfwidth if halfwidth is not None else 12.0 * np.sqrt(h)
    ts = np.linspace(-halfwidth, halfwidth, npts)
    w = _simpson_weights(npts, ts[1] - ts[0])
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    out = np.empty(xi.shape, dtype=complex)
    for k, x_val in enumerate(xi):
        x0 = legendre_critical_point(q, [x_val])[0]
        zs = x0 + ts * d
        out[k] = np.sum(w * u(zs) * np.exp(-1j * zs * x_val / h)) * d
    return out


def fourier_roundtrip(u: Callable, q, h: float, x0: complex,
                      halfwidth: Optional[float] = None, npts: int = 2001) -> complex:
    """G(F u)(x0): the inversion identity along composed good contours."""
    q = np.asarray(q, dtype=float)
    q_star = legendre_weight(q)
    d_star = negative_direction(q_star)
    d = negative_direction(q)
    if abs(np.real(d * d_star)) < 0.1:
        raise ValueError("contour pairing degenerate; no good affine contour found")
    if np.real(d * d_star) < 0:
        d_star = -d_star
    weight = QuadraticWeight.from_real_form(q)
    xi_c = weight.xi(np.array([x0 + 0j]))[0]
    halfwidth = halfwidth if halfwidth is not None else 12.0 * np.sqrt(h)
    taus = np.linspace(-halfwidth, halfwidth, npts)
    w = _simpson_weights(npts, taus[1] - taus[0])
    xis = xi_c + taus * d_star
    f_vals = fourier_forward(u, q, h, xis, halfwidth=halfwidth, npts=npts)
    integrand = w * f_vals * np.exp(1j * x0 * xis / h)
    return complex(np.sum(integrand) * d_star / (2.0 * np.pi * h))


def saturating_germ(q, h: float) -> Callable:
    """Holomorphic u with |u| = e^{Phi/h} for a pluriharmonic weight.

    Exists exactly when the Levi part vanishes; used to probe the growth
    of F u against the dual weight.
    """
    weight = QuadraticWeight.from_real_form(np.asarray(q, dtype=float))
    if np.linalg.norm(weight.L) > 1e-12:
        raise ValueError("saturating germ exists only for pluriharmonic weights")
    p = complex(weight.P[0, 0])

    def u(z):
        z = np.asarray(z, dtype=complex)
        return np.exp(p * z * z / h)  # |u| = e^{Re(P z^2)/h} = e^{Phi/h}

    return u
