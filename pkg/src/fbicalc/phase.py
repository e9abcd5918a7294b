"""Quadratic FBI phases and their derived objects.

An FBI phase is phi(x, y) = x.Qxx x/2 + x.Qxy y + y.Qyy y/2 with
det Qxy != 0 and Im Qyy positive definite.  From it we derive the
strictly pluri-subharmonic weight Phi, the real critical point y(x),
the canonical matrix kappa_phi, the polarization psi of Phi, the
unitarity constant and the Legendre-type dual weight.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .csymplectic import (
    CanonicalMap,
    PositivityError,
    QuadraticWeight,
    _as_matrix,
    partial_critical,
    signature,
)


@dataclass
class FBIPhase:
    """Holomorphic quadratic phase on C^n_x x C^n_y as a matrix triple."""

    Qxx: np.ndarray
    Qxy: np.ndarray
    Qyy: np.ndarray

    def __post_init__(self):
        self.Qxx = _as_matrix(self.Qxx)
        self.Qxy = _as_matrix(self.Qxy)
        self.Qyy = _as_matrix(self.Qyy)
        for m, name in ((self.Qxx, "Qxx"), (self.Qyy, "Qyy")):
            if np.linalg.norm(m - m.T) > 1e-12 * max(1.0, np.linalg.norm(m)):
                raise ValueError("%s must be symmetric" % name)
        if abs(np.linalg.det(self.Qxy)) < 1e-14:
            raise ValueError("det Qxy must be nonzero")
        im_yy = np.imag(self.Qyy)
        if np.min(np.linalg.eigvalsh(im_yy)) <= 0:
            raise PositivityError("Im Qyy must be positive definite")

    @property
    def n(self) -> int:
        return self.Qxy.shape[0]

    def value(self, x, y):
        """phi(x, y); x, y broadcastable arrays of shape (..., n)."""
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        xx = np.einsum("...i,ij,...j->...", x, self.Qxx, x) / 2.0
        xy = np.einsum("...i,ij,...j->...", x, self.Qxy, y)
        yy = np.einsum("...i,ij,...j->...", y, self.Qyy, y) / 2.0
        return xx + xy + yy

    def dx(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return np.einsum("ij,...j->...i", self.Qxx, x) + np.einsum(
            "ij,...j->...i", self.Qxy, y
        )

    def dy(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        return np.einsum("ji,...j->...i", self.Qxy, x) + np.einsum(
            "ij,...j->...i", self.Qyy, y
        )

    def star_value(self, x, y):
        """phi*(x, y) = conj(phi(conj x, conj y)), extended holomorphically."""
        xc = np.conj(np.asarray(x, dtype=complex))
        yc = np.conj(np.asarray(y, dtype=complex))
        return np.conj(self.value(xc, yc))


def bargmann_phase(n: int = 1) -> FBIPhase:
    """phi = i (x - y)^2 / 2."""
    i = np.eye(n)
    return FBIPhase(1j * i, -1j * i, 1j * i)


def normal_form_phase(a, b) -> FBIPhase:
    """phi = A x . y + (i/2) B y . y with B real positive, det A != 0."""
    a = _as_matrix(a)
    b = _as_matrix(b)
    n = a.shape[0]
    return FBIPhase(np.zeros((n, n)), a.T, 1j * b)


def round_bargmann_phase() -> FBIPhase:
    """n = 1 phase with weight |x|^2 / 2 (classical Bargmann space)."""
    return FBIPhase(1j, -1j * np.sqrt(2.0), 1j)


def weight_from_phase(phi: FBIPhase):
    """Weight Phi(x) = sup over real y of -Im phi(x, y) plus the critical maps.

    Returns (weight, y_of_x, eta_of_x).  y_of_x and eta_of_x are vectorized
    callables; eta(x) = -phi_y(x, y(x)) is real for every x.
    """
    n = phi.n
    im_yy = np.imag(phi.Qyy)

    def y_of_x(x):
        x = np.asarray(x, dtype=complex)
        rhs = -np.imag(np.einsum("ji,...j->...i", phi.Qxy, x))
        return np.einsum("ij,...j->...i", np.linalg.inv(im_yy), rhs)

    def eta_of_x(x):
        x = np.asarray(x, dtype=complex)
        y = y_of_x(x).astype(complex)
        return np.real(-phi.dy(x, y))

    # assemble Phi as a QuadraticWeight by evaluating on a real basis
    def phi_val(x):
        y = y_of_x(x).astype(complex)
        return -np.imag(phi.value(x, y))

    q = np.zeros((2 * n, 2 * n))
    basis = [np.eye(n)[k] + 0j for k in range(n)] + [1j * np.eye(n)[k] for k in range(n)]
    for a in range(2 * n):
        for b in range(a, 2 * n):
            val = phi_val(basis[a] + basis[b])
            va = phi_val(basis[a])
            vb = phi_val(basis[b])
            q[a, b] = q[b, a] = (val - va - vb) / 2.0
    for a in range(2 * n):
        q[a, a] = phi_val(basis[a])
    weight = QuadraticWeight.from_real_form(q)
    if not weight.strictly_psh:
        raise PositivityError("weight of a valid phase must be strictly psh")
    return weight, y_of_x, eta_of_x


def kappa_matrix(phi: FBIPhase) -> CanonicalMap:
    """kappa_phi: (y, -phi_y(x, y)) -> (x, phi_x(x, y)) as a 2n x 2n matrix."""
    n = phi.n
    bt_inv = np.linalg.inv(phi.Qxy.T)
    top_left = -bt_inv @ phi.Qyy
    top_right = -bt_inv
    bottom_left = phi.Qxy + phi.Qxx @ top_left
    bottom_right = phi.Qxx @ top_right
    m = np.block([[top_left, top_right], [bottom_left, bottom_right]])
    return CanonicalMap(m)


@dataclass
class Polarization:
    """Holomorphic quadratic psi with psi(x, conj x) = Phi(x)."""

    P: np.ndarray
    L: np.ndarray

    def value(self, x, y):
        x = np.asarray(x, dtype=complex)
        y = np.asarray(y, dtype=complex)
        xx = np.einsum("...i,ij,...j->...", x, self.P, x) / 2.0
        cross = np.einsum("...i,...i->...", np.einsum("ij,...j->...i", self.L, x), y)
        yy = np.einsum("...i,ij,...j->...", y, np.conj(self.P), y) / 2.0
        return xx + cross + yy

    @property
    def psi_xy(self) -> np.ndarray:
        """Mixed Hessian; equals the Levi matrix of the weight (transposed slot)."""
        return self.L


def polarization(weight: QuadraticWeight) -> Polarization:
    """The unique holomorphic quadratic form with psi(x, conj x) = Phi(x)."""
    return Polarization(weight.P.copy(), weight.L.copy())


def unitarity_constant(phi: FBIPhase) -> float:
    """Normalization making T an isometry L^2 -> H_Phi.

    For the normal form this is 2^{-n/2} pi^{-3n/4} (det B)^{-1/4} |det A|;
    the same expression with A = Qxy, B = Im Qyy is used for a general
    valid phase (Qxx shifts Phi pluriharmonically, Re Qyy acts as a
    unitary real-side multiplier).
    """
    n = phi.n
    det_b = np.linalg.det(np.imag(phi.Qyy))
    det_a = abs(np.linalg.det(phi.Qxy))
    return float(2.0 ** (-n / 2.0) * np.pi ** (-3.0 * n / 4.0) * det_b ** (-0.25) * det_a)


def legendre_weight(q):
    """Dual weight Phi*(xi) = vc_x(Phi(x) + Im(x . xi)) for signature (n, n) forms.

    ``q`` is the symmetric matrix of Phi over (Re x, Im x); the result is the
    symmetric matrix of Phi* over (Re xi, Im xi).  Exact linear algebra.
    """
    q = np.asarray(q, dtype=float)
    q = (q + q.T) / 2.0
    m = q.shape[0]
    n = m // 2
    if signature(q) != (n, n):
        raise ValueError("Legendre dual needs a non-degenerate (n, n) form, got %s" % (signature(q),))
    # Im(x . xi) = u . t + v . s for x = u + iv, xi = s + it.
    # Critical point: 2 q z + (t; s) = 0, z = (u; v).
    # Build the joint form on (z, w) with w = (s; t) and eliminate z.
    swap = np.zeros((m, m))
    swap[:n, n:] = np.eye(n)  # picks t
    swap[n:, :n] = np.eye(n)  # picks s
    joint = np.zeros((2 * m, 2 * m))
    joint[m:, m:] = q  # z-block last so partial_critical can eliminate it
    joint[:m, m:] = swap / 2.0
    joint[m:, :m] = swap.T / 2.0
    reduced, _, _, _ = partial_critical(joint, m)
    return (reduced + reduced.T) / 2.0


def legendre_critical_point(q, xi):
    """The critical x(xi) of x -> Phi(x) + Im(x . xi), as a complex vector."""
    q = np.asarray(q, dtype=float)
    m = q.shape[0]
    n = m // 2
    xi = np.atleast_1d(np.asarray(xi, dtype=complex))
    rhs = np.concatenate([np.imag(xi), np.real(xi)])
    z = np.linalg.solve(2.0 * q, -rhs)
    return z[:n] + 1j * z[n:]
