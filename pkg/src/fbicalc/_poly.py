"""Sparse multivariate polynomials and truncated 1-D power series.

Internal helpers shared by the symbol calculus, stationary phase and WKB
modules.  Coefficients are Python complex; exponent keys are tuples of ints.
"""

from __future__ import annotations

import math

import numpy as np

_ZTOL = 0.0  # keep exact zeros only; callers prune with chop()


class Poly:
    """Polynomial in ``n`` variables, stored as {exponent tuple: coefficient}."""

    __slots__ = ("n", "c")

    def __init__(self, n, c=None):
        self.n = n
        self.c = dict(c or {})

    @classmethod
    def const(cls, n, value):
        if value == 0:
            return cls(n)
        return cls(n, {(0,) * n: complex(value)})

    @classmethod
    def var(cls, n, i, coeff=1.0):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): complex(coeff)})

    def copy(self):
        return Poly(self.n, self.c)

    def __bool__(self):
        return any(v != 0 for v in self.c.values())

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Poly.const(self.n, other)
        out = dict(self.c)
        for e, v in other.c.items():
            out[e] = out.get(e, 0.0) + v
        return Poly(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.n, {e: -v for e, v in self.c.items()})

    def __sub__(self, other):
        if isinstance(other, (int, float, complex)):
            other = Poly.const(self.n, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            if other == 0:
                return Poly(self.n)
            return Poly(self.n, {e: v * other for e, v in self.c.items()})
        out = {}
        for e1, v1 in self.c.items():
            for e2, v2 in other.c.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0.0) + v1 * v2
        return Poly(self.n, out)

    __rmul__ = __mul__

    def diff(self, i):
        out = {}
        for e, v in self.c.items():
            if e[i] == 0:
                continue
            e2 = list(e)
            e2[i] -= 1
            out[tuple(e2)] = out.get(tuple(e2), 0.0) + v * e[i]
        return Poly(self.n, out)

    def eval(self, point):
        point = [complex(p) for p in point]
        total = 0.0 + 0.0j
        for e, v in self.c.items():
            term = v
            for k, p in zip(e, point):
                if k:
                    term = term * p**k
            total += term
        return total

    def eval_grid(self, *arrays):
        """Vectorized evaluation; ``arrays`` are broadcastable complex arrays."""
        total = np.zeros(np.broadcast(*arrays).shape, dtype=complex)
        for e, v in self.c.items():
            term = np.full_like(total, v)
            for k, arr in zip(e, arrays):
                if k:
                    term = term * arr**k
            total = total + term
        return total

    def degree(self):
        return max((sum(e) for e, v in self.c.items() if v != 0), default=-1)

    def truncate(self, max_degree):
        return Poly(self.n, {e: v for e, v in self.c.items() if sum(e) <= max_degree})

    def chop(self, tol=0.0):
        return Poly(self.n, {e: v for e, v in self.c.items() if abs(v) > tol})

    def abs_sum_on_polydisc(self, radii):
        """Monomial-wise sup bound sum_e |c_e| * prod r_i^e_i (exact for monomials)."""
        total = 0.0
        for e, v in self.c.items():
            term = abs(v)
            for k, r in zip(e, radii):
                if k:
                    term *= r**k
            total += term
        return total

    def subs_merge(self, src, dst):
        """Substitute variable ``src`` := variable ``dst`` and drop ``src``.

        Returns a polynomial in n-1 variables (the ``src`` slot removed).
        """
        out = {}
        for e, v in self.c.items():
            e2 = list(e)
            e2[dst] += e2[src]
            del e2[src]
            key = tuple(e2)
            out[key] = out.get(key, 0.0) + v
        return Poly(self.n - 1, out)

    def conj_coeffs(self):
        return Poly(self.n, {e: np.conj(v) for e, v in self.c.items()})

    def __repr__(self):
        terms = sorted(self.c.items())
        return "Poly(%d, %s)" % (self.n, terms)


# ---------------------------------------------------------------------------
# Truncated power series in one variable (lists of coefficients, c[0] first).


def ser_trim(a, order):
    a = list(a[: order + 1])
    a += [0.0] * (order + 1 - len(a))
    return a


def ser_add(a, b, order):
    a = ser_trim(a, order)
    b = ser_trim(b, order)
    return [x + y for x, y in zip(a, b)]


def ser_mul(a, b, order):
    out = [0.0 + 0.0j] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x == 0:
            continue
        for j, y in enumerate(b[: min(len(b), order + 1 - i)]):
            out[i + j] += x * y
    return out


def ser_scale(a, s):
    return [x * s for x in a]


def ser_diff(a):
    return [a[k] * k for k in range(1, len(a))]


def ser_integrate(a, const=0.0):
    return [complex(const)] + [a[k] / (k + 1) for k in range(len(a))]


def ser_compose(a, b, order):
    """a(b(t)) with b[0] == 0 required."""
    if len(b) > 0 and b[0] != 0:
        raise ValueError("series composition needs b(0) = 0")
    out = [0.0 + 0.0j] * (order + 1)
    power = [1.0 + 0.0j] + [0.0] * order  # b^0
    for k, ak in enumerate(a[: order + 1]):
        if ak != 0:
            for i in range(order + 1):
                out[i] += ak * power[i]
        power = ser_mul(power, b, order)
    return out


def ser_reciprocal(a, order):
    if a[0] == 0:
        raise ZeroDivisionError("series has vanishing constant term")
    out = [1.0 / a[0]] + [0.0 + 0.0j] * order
    for k in range(1, order + 1):
        s = 0.0 + 0.0j
        for j in range(1, k + 1):
            if j < len(a):
                s += a[j] * out[k - j]
        out[k] = -s / a[0]
    return out


def ser_sqrt(a, order, branch=None):
    """Square root of a series with a[0] != 0; principal branch by default."""
    if a[0] == 0:
        raise ZeroDivisionError("sqrt of series with vanishing constant term")
    s0 = branch if branch is not None else np.sqrt(complex(a[0]))
    out = [s0] + [0.0 + 0.0j] * order
    for k in range(1, order + 1):
        s = 0.0 + 0.0j
        for j in range(1, k):
            s += out[j] * out[k - j]
        ak = a[k] if k < len(a) else 0.0
        out[k] = (ak - s) / (2 * s0)
    return out


def ser_reverse(a, order):
    """Compositional inverse of a with a[0]=0, a[1] != 0 (Lagrange by iteration)."""
    if a[0] != 0 or a[1] == 0:
        raise ValueError("series reversion needs a(0)=0, a'(0) != 0")
    b = [0.0, 1.0 / a[1]] + [0.0 + 0.0j] * (order - 1)
    for _ in range(order + 2):
        comp = ser_compose(a, b, order)
        err = [-c for c in comp]
        err[1] += 1.0
        # Newton-ish update: b <- b + err / a'(b) ~ b + err * b'(t)
        corr = ser_mul(err, ser_trim(ser_diff(b) + [0.0], order), order)
        b = ser_add(b, corr, order)
    return b


def factorial(k):
    return math.factorial(k)


def double_factorial_odd(k):
    """(2k-1)!! with the convention (-1)!! = 1."""
    out = 1
    for j in range(1, 2 * k, 2):
        out *= j
    return out
