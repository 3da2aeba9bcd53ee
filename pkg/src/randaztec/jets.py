"""Truncated Taylor series ("jets") with complex coefficients.

A jet in n variables stores coefficients c[i_1, ..., i_n] for
0 <= i_k <= L_k (box truncation).  Leading axes before the last n are a
batch: every operation acts elementwise on them, which is how expectations
over quadrature nodes are vectorized.

Transcendental functions are evaluated as c_0-scaled power series in the
nilpotent part n = f - c_0, which terminates after sum(L_k) terms.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

ZERO_TOL = 1e-300
BRANCH_TOL = 1e-14


class JetError(ValueError):
    pass


class Jet:
    __slots__ = ("c", "nvars")

    def __init__(self, c, nvars: int | None = None):
        c = np.asarray(c, dtype=complex)
        if nvars is None:
            nvars = c.ndim
        if nvars < 1 or c.ndim < nvars:
            raise JetError("need at least one jet variable")
        self.c = c
        self.nvars = nvars

    # -- construction ------------------------------------------------
    @classmethod
    def constant(cls, value, orders: Sequence[int]) -> "Jet":
        value = np.asarray(value, dtype=complex)
        c = np.zeros(value.shape + tuple(L + 1 for L in orders), dtype=complex)
        c[(...,) + (0,) * len(orders)] = value
        return cls._make(c, len(orders))

    @classmethod
    def variable(cls, i: int, orders: Sequence[int], value=0.0) -> "Jet":
        """value + x_i."""
        out = cls.constant(value, orders)
        if orders[i] >= 1:
            idx = [0] * len(orders)
            idx[i] = 1
            out.c[(...,) + tuple(idx)] = 1.0
        return out

    @classmethod
    def _make(cls, c, nvars):
        if cls is Jet1 or cls is Jet2:
            return cls(c)
        return cls(c, nvars)

    def _new(self, c) -> "Jet":
        return type(self)._make(c, self.nvars)

    # -- shape -------------------------------------------------------
    @property
    def orders(self) -> tuple[int, ...]:
        return tuple(s - 1 for s in self.c.shape[-self.nvars:])

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.c.shape[:-self.nvars]

    @property
    def const(self):
        v = self.c[(...,) + (0,) * self.nvars]
        return complex(v) if np.ndim(v) == 0 else v

    def _bcast(self, v):
        """Reshape a batch-shaped array so it broadcasts against self.c."""
        v = np.asarray(v)
        return v.reshape(v.shape + (1,) * self.nvars)

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.nvars != self.nvars or other.orders != self.orders:
                raise JetError("jets have different variables or orders")
            return other
        return self.constant(other, self.orders)

    # -- arithmetic --------------------------------------------------
    def __add__(self, other):
        if isinstance(other, Jet):
            return self._new(self.c + self._coerce(other).c)
        c = self.c.copy()
        c[(...,) + (0,) * self.nvars] += other
        return self._new(c)

    __radd__ = __add__

    def __neg__(self):
        return self._new(-self.c)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self._new(self.c * (self._bcast(other) if np.ndim(other) else other))
        other = self._coerce(other)
        a, b = self.c, other.c
        shape = self.c.shape[-self.nvars:]
        out = np.zeros(np.broadcast_shapes(a.shape, b.shape), dtype=complex)
        for idx in np.ndindex(*shape):
            ai = a[(...,) + idx]
            if not np.any(ai):
                continue
            dst = (...,) + tuple(slice(i, None) for i in idx)
            src = (...,) + tuple(slice(0, s - i) for i, s in zip(idx, shape))
            out[dst] += self._bcast(ai) * b[src]
        return self._new(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return self * other.reciprocal()
        return self * (1.0 / np.asarray(other, dtype=complex))

    def __rtruediv__(self, other):
        return self.reciprocal() * other

    def __pow__(self, a):
        if isinstance(a, (int, np.integer)) and a >= 0:
            out = self.constant(np.ones(self.batch_shape), self.orders)
            base = self
            n = int(a)
            while n:
                if n & 1:
                    out = out * base
                n >>= 1
                if n:
                    base = base * base
            return out
        return self.pow_real(a)

    # -- functions of one jet ---------------------------------------
    def _degree(self) -> int:
        return sum(self.orders)

    def _series(self, coefs: Sequence) -> "Jet":
        """sum_j coefs[j] * n^j with n the nilpotent part (coefs may be batch arrays)."""
        n = self - self.const
        out = self.constant(coefs[-1], self.orders)
        for cj in reversed(coefs[:-1]):
            out = out * n + cj
        return out

    def _check_nonzero(self):
        if np.any(np.abs(self.const) <= ZERO_TOL):
            raise JetError("constant term is zero")

    def reciprocal(self) -> "Jet":
        self._check_nonzero()
        c0 = np.asarray(self.const)
        D = self._degree()
        return self._series([(-1) ** j / c0 ** (j + 1) for j in range(D + 1)])

    def exp(self) -> "Jet":
        c0 = np.asarray(self.const)
        e = np.exp(c0)
        D = self._degree()
        return self._series([e / math.factorial(j) for j in range(D + 1)])

    def log(self) -> "Jet":
        """Principal branch."""
        self._check_nonzero()
        c0 = np.asarray(self.const)
        D = self._degree()
        coefs = [np.log(c0)] + [(-1) ** (j + 1) / (j * c0 ** j) for j in range(1, D + 1)]
        return self._series(coefs)

    def pow_real(self, a: float) -> "Jet":
        """f**a on the principal branch; c_0 must be off the closed negative real axis."""
        c0 = np.asarray(self.const)
        bad = (c0.real <= 0) & (np.abs(c0.imag) <= BRANCH_TOL * np.maximum(np.abs(c0), ZERO_TOL))
        if np.any(bad):
            raise JetError("pow_real needs a constant term off the negative real axis")
        D = self._degree()
        coefs = []
        binom = 1.0
        for j in range(D + 1):
            coefs.append(binom * c0 ** (a - j))
            binom *= (a - j) / (j + 1)
        return self._series(coefs)

    # -- reductions --------------------------------------------------
    def mean(self, weights) -> "Jet":
        """Weighted sum over the leading batch axis."""
        return self._new(np.tensordot(np.asarray(weights, dtype=float), self.c, axes=(0, 0)))

    def coeff(self, idx: Sequence[int]):
        if len(idx) != self.nvars or any(i > L or i < 0 for i, L in zip(idx, self.orders)):
            raise JetError(f"coefficient {tuple(idx)} outside orders {self.orders}")
        v = self.c[(...,) + tuple(idx)]
        return complex(v) if np.ndim(v) == 0 else v

    def partial(self, idx: Sequence[int]):
        """prod(i_k!) * c[idx], the mixed partial derivative at the expansion point."""
        f = math.prod(math.factorial(i) for i in idx)
        return f * self.coeff(idx)

    def truncate(self, orders: Sequence[int]) -> "Jet":
        sl = (...,) + tuple(slice(0, L + 1) for L in orders)
        return type(self)._make(self.c[sl].copy(), self.nvars)

    def slice_var(self, i: int, k: int) -> "Jet":
        """The coefficient of x_i^k, as a jet in the same variables (order of x_i becomes 0)."""
        sl = [slice(None)] * self.c.ndim
        sl[self.c.ndim - self.nvars + i] = slice(k, k + 1)
        if k > self.orders[i]:
            raise JetError("order exceeded")
        return Jet(self.c[tuple(sl)], self.nvars)

    def __repr__(self):
        return f"{type(self).__name__}(orders={self.orders}, batch={self.batch_shape})"


class Jet1(Jet):
    """Univariate jet c_0 + c_1 u + ... + c_L u^L."""

    def __init__(self, c, nvars: int | None = None):
        c = np.asarray(c, dtype=complex)
        super().__init__(c, 1)

    @classmethod
    def variable(cls, L: int, value=0.0) -> "Jet1":  # type: ignore[override]
        return super().variable(0, (L,), value)

    @classmethod
    def constant(cls, value, orders) -> "Jet1":
        if isinstance(orders, int):
            orders = (orders,)
        return super().constant(value, orders)

    def derivative(self, l: int):
        if l > self.orders[0]:
            raise JetError(f"derivative order {l} exceeds jet order {self.orders[0]}")
        return self.partial((l,))


class Jet2(Jet):
    """Bivariate jet with coefficients c[i, j], i <= L1, j <= L2."""

    def __init__(self, c, nvars: int | None = None):
        c = np.asarray(c, dtype=complex)
        super().__init__(c, 2)

    @classmethod
    def variables(cls, L1: int, L2: int, values=(0.0, 0.0)) -> tuple["Jet2", "Jet2"]:
        return (super().variable(0, (L1, L2), values[0]),
                super().variable(1, (L1, L2), values[1]))

    def mixed_derivative(self, q: int, r: int):
        L1, L2 = self.orders
        if q > L1 or r > L2:
            raise JetError(f"mixed derivative ({q}, {r}) exceeds orders ({L1}, {L2})")
        return self.partial((q, r))


def from_function_derivatives(f: Jet, derivs: Sequence) -> Jet:
    """g(f) for a scalar analytic g given g^(j)(c_0), j = 0..deg."""
    return f._series([d / math.factorial(j) for j, d in enumerate(derivs)])
