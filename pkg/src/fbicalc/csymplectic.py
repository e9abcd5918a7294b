"""Complex symplectic linear algebra on C^{2n}.

Vectors are ordered (x_1..x_n, xi_1..xi_n).  The symplectic form is
sigma(X, Y) = J X . Y with the complex bilinear dot product and

    J = [[0, I], [-I, 0]].

Real quadratic forms on C^n are handled in the realified coordinates
(Re x_1..Re x_n, Im x_1..Im x_n) as symmetric 2n x 2n matrices q with
value z^T q z, or equivalently as a pair (P, L): P complex symmetric,
L Hermitian, value Re(P x . x) + (L x) . conj(x).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-10


class PositivityError(ValueError):
    """A definiteness precondition failed."""


def _as_matrix(m):
    m = np.asarray(m, dtype=complex)
    if m.ndim == 0:
        m = m.reshape(1, 1)
    return m


def standard_j(n: int) -> np.ndarray:
    """The matrix of sigma: sigma(X, Y) = (J X) . Y."""
    z = np.zeros((n, n))
    i = np.eye(n)
    return np.block([[z, i], [-i, z]]).astype(complex)


def symplectic_form(x, y) -> complex:
    """sigma(X, Y) = J X . Y for vectors in C^{2n}."""
    x = np.asarray(x, dtype=complex).ravel()
    y = np.asarray(y, dtype=complex).ravel()
    if x.shape != y.shape:
        raise ValueError("dimension mismatch: %s vs %s" % (x.shape, y.shape))
    if x.size % 2 or x.size == 0:
        raise ValueError("phase-space vectors have even positive length")
    n = x.size // 2
    # (J X) . Y with J as in standard_j, written out to avoid forming J
    return complex(np.dot(x[n:], y[:n]) - np.dot(x[:n], y[n:]))


def is_canonical(m, tol: float = DEFAULT_TOL):
    """Check M^T J M = J.  Returns (flag, defect norm)."""
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1] or m.shape[0] % 2:
        raise ValueError("canonical maps act on C^{2n}")
    j = standard_j(m.shape[0] // 2)
    defect = np.linalg.norm(m.T @ j @ m - j)
    return bool(defect <= tol * max(1.0, np.linalg.norm(m) ** 2)), float(defect)


@dataclass
class CanonicalMap:
    """A complex linear canonical transformation of C^{2n}."""

    matrix: np.ndarray

    def __post_init__(self):
        self.matrix = _as_matrix(self.matrix)
        ok, defect = is_canonical(self.matrix)
        if not ok:
            raise ValueError("matrix is not sigma-preserving (defect %.3e)" % defect)

    @property
    def n(self) -> int:
        return self.matrix.shape[0] // 2

    def __call__(self, v):
        return self.matrix @ np.asarray(v, dtype=complex)

    def x_part(self, v):
        return (self.matrix @ np.asarray(v, dtype=complex))[: self.n]


@dataclass
class LagrangianPlane:
    """Complex Lagrangian subspace, stored as a 2n x n basis matrix."""

    basis: np.ndarray

    def __post_init__(self):
        self.basis = _as_matrix(self.basis)
        m, n = self.basis.shape
        if m != 2 * n:
            raise ValueError("basis must be 2n x n")
        if np.linalg.matrix_rank(self.basis, tol=DEFAULT_TOL * max(1, np.linalg.norm(self.basis))) < n:
            raise ValueError("basis is rank deficient")
        j = standard_j(n)
        res = self.basis.T @ j @ self.basis
        if np.linalg.norm(res) > 1e-8 * max(1.0, np.linalg.norm(self.basis) ** 2):
            raise ValueError("sigma does not vanish on the span")

    @property
    def n(self) -> int:
        return self.basis.shape[1]


def lagrangian_from_graph(f) -> LagrangianPlane:
    """Plane {(x, F x)} for complex symmetric F (graph over the base)."""
    f = _as_matrix(f)
    n = f.shape[0]
    return LagrangianPlane(np.vstack([np.eye(n), f]))


def fiber_plane(n: int) -> LagrangianPlane:
    """The fiber {(0, eta)}."""
    return LagrangianPlane(np.vstack([np.zeros((n, n)), np.eye(n)]))


def base_plane(n: int) -> LagrangianPlane:
    """The base {(x, 0)}."""
    return LagrangianPlane(np.vstack([np.eye(n), np.zeros((n, n))]))


@dataclass
class AntilinearInvolution:
    """Antilinear map Z -> G conj(Z) with G conj(G) = I."""

    conj_matrix: np.ndarray

    def __post_init__(self):
        self.conj_matrix = _as_matrix(self.conj_matrix)
        g = self.conj_matrix
        if np.linalg.norm(g @ np.conj(g) - np.eye(g.shape[0])) > 1e-8 * max(1.0, np.linalg.norm(g) ** 2):
            raise ValueError("G conj(G) != I: not an involution")

    def __call__(self, v):
        return self.conj_matrix @ np.conj(np.asarray(v, dtype=complex))

    @property
    def n(self) -> int:
        return self.conj_matrix.shape[0] // 2


def involution_for_subspace(basis) -> AntilinearInvolution:
    """Gamma with Gamma|_Sigma = 1 for Sigma spanned (over R) by the columns.

    Requires Sigma maximally totally real, i.e. the columns form a C-basis
    of C^{2n}; then Gamma(V c) = V conj(c) gives G = V conj(V)^{-1}.
    """
    v = _as_matrix(basis)
    if v.shape[0] != v.shape[1]:
        raise ValueError("need 2n real basis vectors of a maximally totally real subspace")
    g = v @ np.linalg.inv(np.conj(v))
    return AntilinearInvolution(g)


def conjugation_involution(n: int) -> AntilinearInvolution:
    """Gamma for Sigma = R^{2n}: plain complex conjugation."""
    return AntilinearInvolution(np.eye(2 * n, dtype=complex))


# ---------------------------------------------------------------------------
# Real quadratic forms on C^n


@dataclass
class QuadraticWeight:
    """Real quadratic form Phi(x) = Re(P x . x) + (L x) . conj(x) on C^n.

    P is complex symmetric (the holomorphic second derivative, half folded
    in), L is the Hermitian Levi matrix.
    """

    P: np.ndarray
    L: np.ndarray

    def __post_init__(self):
        self.P = _as_matrix(self.P)
        self.L = _as_matrix(self.L)
        if np.linalg.norm(self.P - self.P.T) > 1e-10 * max(1.0, np.linalg.norm(self.P)):
            raise ValueError("P must be symmetric")
        if np.linalg.norm(self.L - self.L.conj().T) > 1e-10 * max(1.0, np.linalg.norm(self.L)):
            raise ValueError("L must be Hermitian")

    @property
    def n(self) -> int:
        return self.P.shape[0]

    def value(self, x):
        """Phi at points x of shape (..., n); returns real array."""
        x = np.asarray(x, dtype=complex)
        px = np.einsum("ij,...j->...i", self.P, x)
        lx = np.einsum("ij,...j->...i", self.L, x)
        return np.real(np.einsum("...i,...i->...", px, x)) + np.real(
            np.einsum("...i,...i->...", lx, np.conj(x))
        )

    def grad(self, x):
        """Holomorphic gradient d/dx Phi = P x + conj(L x)."""
        x = np.asarray(x, dtype=complex)
        return np.einsum("ij,...j->...i", self.P, x) + np.conj(
            np.einsum("ij,...j->...i", self.L, x)
        )

    def xi(self, x):
        """The point (2/i) dPhi/dx on the associated I-Lagrangian plane."""
        return -2j * self.grad(x)

    def levi_eigenvalues(self):
        return np.linalg.eigvalsh(self.L)

    @property
    def strictly_psh(self) -> bool:
        return bool(np.min(self.levi_eigenvalues()) > 0)

    def to_real_form(self) -> np.ndarray:
        """Symmetric matrix of Phi over (Re x, Im x)."""
        re_p, im_p = np.real(self.P), np.imag(self.P)
        a, b = np.real(self.L), np.imag(self.L)
        quu = re_p + a
        qvv = -re_p + a
        quv = -(im_p + b)
        return np.block([[quu, quv], [quv.T, qvv]])

    @classmethod
    def from_real_form(cls, q) -> "QuadraticWeight":
        q = np.asarray(q, dtype=float)
        m = q.shape[0] // 2
        quu = q[:m, :m]
        qvv = q[m:, m:]
        quv = q[:m, m:]
        a = (quu + qvv) / 2.0
        re_p = (quu - qvv) / 2.0
        im_p = -(quv + quv.T) / 2.0
        b = -(quv - quv.T) / 2.0
        return cls(re_p + 1j * im_p, a + 1j * b)

    def plane_basis(self) -> np.ndarray:
        """Real basis (columns) of Lambda_Phi = {(x, (2/i) dPhi(x))} in C^{2n}."""
        n = self.n
        cols = []
        for k in range(2 * n):
            x = np.zeros(n, dtype=complex)
            x[k % n] = 1.0 if k < n else 1.0j
            cols.append(np.concatenate([x, self.xi(x)]))
        return np.array(cols).T


def gamma_for_weight(weight: QuadraticWeight) -> AntilinearInvolution:
    """The antilinear involution fixing Lambda_Phi pointwise."""
    if abs(np.linalg.det(weight.L)) < 1e-12:
        raise ValueError("singular Levi matrix: involution undefined")
    return involution_for_subspace(weight.plane_basis())


def hermitian_b(plane: LagrangianPlane, gamma: AntilinearInvolution) -> np.ndarray:
    """Matrix of b(X, Y) = (1/i) sigma(X, Gamma Y) in the plane's basis."""
    v = plane.basis
    n = plane.n
    out = np.empty((n, n), dtype=complex)
    gv = np.column_stack([gamma(v[:, k]) for k in range(n)])
    for j in range(n):
        for k in range(n):
            out[j, k] = symplectic_form(v[:, j], gv[:, k]) / 1j
    herm_defect = np.linalg.norm(out - out.conj().T)
    if herm_defect > 1e-8 * max(1.0, np.linalg.norm(out)):
        raise ValueError("b is not Hermitian to tolerance; plane is not Lagrangian?")
    return (out + out.conj().T) / 2.0


def intersects_nontrivially(plane: LagrangianPlane, sigma_basis, tol: float = DEFAULT_TOL) -> bool:
    """Rank test for Lambda cap Sigma != {0} in the realification R^{4n}."""
    lam = plane.basis
    cols = [lam[:, k] for k in range(lam.shape[1])]
    cols += [1j * lam[:, k] for k in range(lam.shape[1])]
    cols += [np.asarray(sigma_basis, dtype=complex)[:, k] for k in range(np.shape(sigma_basis)[1])]
    m = np.array(cols).T
    real = np.vstack([np.real(m), np.imag(m)])
    rank = np.linalg.matrix_rank(real, tol=tol * max(1.0, np.linalg.norm(real)))
    return rank < real.shape[1]


def classify_positivity(plane: LagrangianPlane, gamma: AntilinearInvolution, tol: float = DEFAULT_TOL):
    """Sign classification of b on the plane.

    Returns (label, eigenvalues) with label in
    {'positive', 'negative', 'mixed/degenerate'}.
    """
    b = hermitian_b(plane, gamma)
    eig = np.linalg.eigvalsh(b)
    scale = max(np.max(np.abs(eig)), 1e-300)
    degenerate = np.any(np.abs(eig) < tol * scale)
    if degenerate:
        return "mixed/degenerate", eig
    if np.all(eig > 0):
        return "positive", eig
    if np.all(eig < 0):
        return "negative", eig
    return "mixed/degenerate", eig


def phase_from_pair(f_plus, f_minus, b=None):
    """FBI phase matrices (A, B, C) with kappa mapping the graph planes to axes.

    Returns the triple for phi(x, y) = A x.x/2 + B x.y - F_- y.y/2, where
    A = B^t (F_+ - F_-)^{-1} B.  Requires Im F_+ > 0 and Im F_- < 0.
    """
    f_plus = _as_matrix(f_plus)
    f_minus = _as_matrix(f_minus)
    n = f_plus.shape[0]
    b = np.eye(n, dtype=complex) if b is None else _as_matrix(b)
    if np.min(np.linalg.eigvalsh((f_plus - f_plus.conj().T) / 2j)) <= 0:
        raise PositivityError("Im F_+ must be positive definite")
    if np.max(np.linalg.eigvalsh((f_minus - f_minus.conj().T) / 2j)) >= 0:
        raise PositivityError("Im F_- must be negative definite")
    if abs(np.linalg.det(b)) < 1e-14:
        raise ValueError("B must be invertible")
    diff = f_plus - f_minus
    assert abs(np.linalg.det(diff)) > 1e-14, "F_+ - F_- singular despite positivity"
    a = b.T @ np.linalg.solve(diff, b)
    from .phase import FBIPhase  # local import to avoid a cycle

    return FBIPhase(a, b, -f_minus)


# ---------------------------------------------------------------------------
# Real quadratic form utilities (realified, arbitrary dimension)


def _sym(q):
    q = np.asarray(q, dtype=float)
    return (q + q.T) / 2.0


def complex_structure_matrix(m: int) -> np.ndarray:
    """Realified multiplication by i on C^m: (u, v) -> (-v, u)."""
    z = np.zeros((m, m))
    i = np.eye(m)
    return np.block([[z, -i], [i, z]])


def levi_decompose(q):
    """Split q = h + l into pluriharmonic and Levi parts (exact).

    q is the symmetric matrix of a real quadratic form over (Re x, Im x).
    """
    q = _sym(q)
    t = complex_structure_matrix(q.shape[0] // 2)
    jq = t.T @ q @ t
    h = (q - jq) / 2.0
    l = (q + jq) / 2.0
    return h, l


def signature(q, tol: float = DEFAULT_TOL):
    """(m_+, m_-) eigenvalue counts of a real symmetric form."""
    eig = np.linalg.eigvalsh(_sym(q))
    scale = max(np.max(np.abs(eig), initial=0.0), 1e-300)
    m_plus = int(np.sum(eig > tol * scale))
    m_minus = int(np.sum(eig < -tol * scale))
    return m_plus, m_minus


def partial_critical(q, d: int):
    """Eliminate the last d variables of q at their critical point.

    Returns (q_prime, sign_q, sign_qq, sign_qpp): the reduced form on the
    first n-d variables and the signatures of q, q'' = q(0, .) and q'.
    """
    q = _sym(q)
    n = q.shape[0]
    if not 0 < d < n:
        raise ValueError("split dimension must be in (0, n)")
    q11 = q[: n - d, : n - d]
    q12 = q[: n - d, n - d :]
    q22 = q[n - d :, n - d :]
    eig22 = np.linalg.eigvalsh(q22)
    if np.min(np.abs(eig22)) < 1e-12 * max(1.0, np.max(np.abs(eig22))):
        raise ValueError("q(0, .) is degenerate: no critical elimination")
    q_prime = q11 - q12 @ np.linalg.solve(q22, q12.T)
    return _sym(q_prime), signature(q), signature(q22), signature(q_prime)


def critical_value_weight(phi, n: int, k: int) -> QuadraticWeight:
    """Partial critical value over the y-block of a psh form on C^{n+k}.

    ``phi`` is the symmetric matrix over (Re x, Im x, Re y, Im y).  The
    y-Hessian must be non-degenerate of signature (k, k); the returned
    weight is checked pluri-subharmonic (Levi part PSD).
    """
    phi = _sym(phi)
    if phi.shape[0] != 2 * (n + k):
        raise ValueError("expected a form on the realification of C^{n+k}")
    # reorder to (x-block, y-block) with x = (Re x, Im x), y = (Re y, Im y)
    idx = list(range(2 * n)) + list(range(2 * n, 2 * n + 2 * k))
    phi = phi[np.ix_(idx, idx)]
    q22 = phi[2 * n :, 2 * n :]
    sig = signature(q22)
    if sig != (k, k):
        raise ValueError("y-Hessian signature %s, expected (%d, %d)" % (sig, k, k))
    reduced, _, _, _ = partial_critical(phi, 2 * k)
    w = QuadraticWeight.from_real_form(reduced)
    levi_min = np.min(np.linalg.eigvalsh(w.L))
    if levi_min < -1e-9 * max(1.0, np.linalg.norm(w.L)):
        raise ValueError("critical value lost pluri-subharmonicity (Levi min %.2e)" % levi_min)
    return w


def weight_to_xy_block_form(weight_x: QuadraticWeight, weight_y: QuadraticWeight):
    """Direct sum of two weights as a form on C^{n_x + n_y} (realified)."""
    qx = weight_x.to_real_form()
    qy = weight_y.to_real_form()
    nx = qx.shape[0]
    ny = qy.shape[0]
    out = np.zeros((nx + ny, nx + ny))
    out[:nx, :nx] = qx
    out[nx:, nx:] = qy
    return out
