"""Real-side test distributions with exact or quadrable FBI transforms.

Each member knows how to evaluate C h^{-3n/4} int e^{i phi(x,y)/h} u(y) dy
at arbitrary complex points (n = 1), either in closed form (Gaussian
moment recursions, complex erfc) or by dense 1-D quadrature.  Exponents
are assembled before exponentiating so that large pluriharmonic factors
cancel instead of overflowing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.special import wofz

from ._poly import double_factorial_odd
from .phase import FBIPhase, unitarity_constant

trapezoid = getattr(np, "trapezoid", None) or np.trapz  # numpy 1.x/2.x compat


def cerfc(z):
    """Complementary error function for complex arguments (Faddeeva based)."""
    z = np.asarray(z, dtype=complex)
    out = np.empty_like(z)
    right = np.real(z) >= 0
    zr = z[right]
    out[right] = np.exp(-zr * zr) * wofz(1j * zr)
    zl = z[~right]
    out[~right] = 2.0 - np.exp(-zl * zl) * wofz(-1j * zl)
    return out


def _scalar_phase(phase: FBIPhase):
    if phase.n != 1:
        raise NotImplementedError("closed-form transforms are n = 1")
    return phase.Qxx[0, 0], phase.Qxy[0, 0], phase.Qyy[0, 0]


def _alpha_beta(phase: FBIPhase, h: float, x, extra_quadratic: float = 0.0):
    """Exponent pieces of the y-integrand: e^{e0} e^{-alpha y^2 + beta y}."""
    qxx, qxy, qyy = _scalar_phase(phase)
    x = np.asarray(x, dtype=complex)
    alpha = -1j * qyy / (2.0 * h) + extra_quadratic / 2.0
    beta = 1j * qxy * x / h
    e0 = 1j * qxx * x * x / (2.0 * h)
    return alpha, beta, e0


def _reduced_moments(alpha, beta, kmax: int):
    """m_k = M_k / M_0 for M_k = int y^k e^{-alpha y^2 + beta y} dy."""
    ms = [np.ones_like(beta)]
    if kmax >= 1:
        ms.append(beta / (2.0 * alpha))
    for k in range(2, kmax + 1):
        ms.append(((k - 1) * ms[k - 2] + beta * ms[k - 1]) / (2.0 * alpha))
    return ms


def _half_line_integral(alpha, beta, e0):
    """e^{e0} * int_0^inf e^{-alpha y^2 + beta y} dy, overflow-safe.

    Splits on the sign of Re z, z = -beta/(2 sqrt alpha): the Faddeeva
    factor w(iz) stays bounded there, and the reflected branch carries the
    full exponent e0 + beta^2/(4 alpha) explicitly.
    """
    sq = np.sqrt(alpha)
    z = np.atleast_1d(-beta / (2.0 * sq))
    e0 = np.broadcast_to(np.atleast_1d(e0), z.shape)
    beta = np.broadcast_to(np.atleast_1d(beta), z.shape)
    out = np.empty(z.shape, dtype=complex)
    right = np.real(z) >= 0
    out[right] = np.exp(e0[right]) * wofz(1j * z[right])
    e_tot = e0[~right] + beta[~right] ** 2 / (4.0 * alpha)
    out[~right] = 2.0 * np.exp(e_tot) - np.exp(e0[~right]) * wofz(-1j * z[~right])
    return 0.5 * np.sqrt(np.pi / alpha) * out


class TestDistribution:
    """Tagged analytic description of a real-side distribution."""

    tag = "base"

    def transform(self, phase: FBIPhase, h: float, x):
        """T u at complex points x (array), including the unitarity constant."""
        raise NotImplementedError

    def l2_norm(self) -> float:
        raise ValueError("%s is not square integrable" % self.tag)

    def eval_real(self, y):
        raise ValueError("%s has no pointwise values" % self.tag)

    def params(self) -> dict:
        return {}

    def to_json(self):
        return {"tag": self.tag, **self.params()}


@dataclass
class Delta(TestDistribution):
    y0: float = 0.0
    tag = "delta"

    def transform(self, phase, h, x):
        c = unitarity_constant(phase)
        x = np.asarray(x, dtype=complex)
        return c * h ** -0.75 * np.exp(1j * phase.value(x[..., None], np.array([self.y0 + 0j])) / h)

    def params(self):
        return {"y0": self.y0}


@dataclass
class PolyGaussian(TestDistribution):
    """u(y) = (sum_k coeffs[k] y^k) * exp(-a y^2 / 2); a = 0 gives a bare polynomial."""

    coeffs: Sequence[complex] = (1.0,)
    a: float = 0.0
    tag = "poly_gaussian"

    def transform(self, phase, h, x):
        alpha, beta, e0 = _alpha_beta(phase, h, x, extra_quadratic=self.a)
        ms = _reduced_moments(alpha, beta, len(self.coeffs) - 1)
        poly = sum(c * m for c, m in zip(self.coeffs, ms))
        c = unitarity_constant(phase)
        log_m0 = 0.5 * (np.log(np.pi) - np.log(alpha)) + beta * beta / (4.0 * alpha)
        return c * h ** -0.75 * poly * np.exp(e0 + log_m0)

    def l2_norm(self):
        if self.a <= 0:
            raise ValueError("bare polynomials are not square integrable")
        total = 0.0
        for k, ck in enumerate(self.coeffs):
            for j, cj in enumerate(self.coeffs):
                m = k + j
                if m % 2 == 0:
                    mom = double_factorial_odd(m // 2) / (2.0 * self.a) ** (m // 2)
                    mom *= np.sqrt(np.pi / self.a)
                    total += np.real(ck * np.conj(cj)) * mom
        return float(np.sqrt(total))

    def eval_real(self, y):
        y = np.asarray(y, dtype=float)
        out = sum(c * y**k for k, c in enumerate(self.coeffs))
        if self.a > 0:
            out = out * np.exp(-self.a * y * y / 2.0)
        return np.asarray(out, dtype=complex)

    def params(self):
        return {"coeffs": [[float(np.real(c)), float(np.imag(c))] for c in self.coeffs], "a": self.a}


def Gaussian(a: float = 1.0) -> PolyGaussian:
    """u(y) = exp(-a y^2 / 2)."""
    g = PolyGaussian((1.0,), a)
    return g


def Constant() -> PolyGaussian:
    return PolyGaussian((1.0,), 0.0)


def Monomial(k: int, a: float = 1.0) -> PolyGaussian:
    coeffs = [0.0] * k + [1.0]
    return PolyGaussian(tuple(coeffs), a)


@dataclass
class Heaviside(TestDistribution):
    tag = "heaviside"

    def transform(self, phase, h, x):
        x = np.asarray(x, dtype=complex)
        alpha, beta, e0 = _alpha_beta(phase, h, x.ravel())
        # int_0^inf e^{-a y^2 + b y} dy = (1/2) sqrt(pi/a) e^{b^2/4a} erfc(-b/(2 sqrt a));
        # assembled as e^{e0} * [...] with the erfc reflection applied in exponent space.
        val = _half_line_integral(alpha, beta, e0)
        c = unitarity_constant(phase)
        return (c * h ** -0.75 * val).reshape(x.shape)

    def eval_real(self, y):
        y = np.asarray(y, dtype=float)
        return (y > 0).astype(complex) + 0.5 * (y == 0)


@dataclass
class AbsValue(TestDistribution):
    tag = "abs"

    def transform(self, phase, h, x):
        x = np.asarray(x, dtype=complex)
        alpha, beta, e0 = _alpha_beta(phase, h, x.ravel())
        # int |y| e^{-a y^2 + b y} dy = e^{e0}/a + (b/2a)(I0(b) - I0(-b))
        i_plus = _half_line_integral(alpha, beta, e0)
        i_minus = _half_line_integral(alpha, -beta, e0)
        val = np.exp(e0) / alpha + (beta / (2.0 * alpha)) * (i_plus - i_minus)
        c = unitarity_constant(phase)
        return (c * h ** -0.75 * val).reshape(x.shape)

    def eval_real(self, y):
        return np.abs(np.asarray(y, dtype=float)).astype(complex)


@dataclass
class SmoothNonanalytic(TestDistribution):
    """u(y) = exp(-1/y) for y > 0: smooth, vanishing to all orders at 0."""

    tag = "smooth_nonanalytic"

    def transform(self, phase, h, x):
        x = np.asarray(x, dtype=complex)
        qxx, qxy, qyy = _scalar_phase(phase)
        im_yy = float(np.imag(qyy))
        # saddle locations over the requested points set the quadrature window
        y_c = -np.imag(np.conj(0) + qxy * x) / im_yy
        y_hi = float(np.max(y_c, initial=0.0)) + 14.0 * np.sqrt(h / im_yy)
        ys = np.arange(0.0, max(y_hi, 1.0), np.sqrt(h) / 8.0)
        vals = np.exp(-1.0 / np.where(ys > 0, ys, np.inf))
        flat = x.ravel()
        out = np.empty(flat.shape, dtype=complex)
        chunk = max(1, 2_000_000 // ys.size)
        for i in range(0, flat.size, chunk):
            xx = flat[i : i + chunk, None]
            ph = np.exp(1j * (qxx * xx**2 / 2 + qxy * xx * ys[None, :] + qyy * ys[None, :] ** 2 / 2) / h)
            out[i : i + chunk] = trapezoid(ph * vals[None, :], ys, axis=1)
        c = unitarity_constant(phase)
        return c * h ** -0.75 * out.reshape(x.shape)

    def eval_real(self, y):
        y = np.asarray(y, dtype=float)
        return np.where(y > 0, np.exp(-1.0 / np.where(y > 0, y, 1.0)), 0.0).astype(complex)


_REGISTRY = {
    "delta": lambda p: Delta(p.get("y0", 0.0)),
    "heaviside": lambda p: Heaviside(),
    "abs": lambda p: AbsValue(),
    "gaussian": lambda p: Gaussian(p.get("a", 1.0)),
    "constant": lambda p: Constant(),
    "poly_gaussian": lambda p: PolyGaussian(
        tuple(complex(c[0], c[1]) for c in p["coeffs"]), p.get("a", 0.0)
    ),
    "polynomial": lambda p: PolyGaussian(tuple(p.get("coeffs", [1.0])), 0.0),
    "smooth_nonanalytic": lambda p: SmoothNonanalytic(),
}


def distribution_from_json(obj) -> TestDistribution:
    tag = obj["tag"]
    if tag not in _REGISTRY:
        raise ValueError("unknown distribution tag %r" % tag)
    params = {k: v for k, v in obj.items() if k != "tag"}
    # gaussian serialized via PolyGaussian shares the tag
    if tag == "gaussian":
        return Gaussian(params.get("a", 1.0))
    return _REGISTRY[tag](params)
