"""Truncated Taylor series (jets) of complex analytic functions.

A jet stores the coefficients ``c_k`` of ``f(z0 + h) = sum c_k h^k`` up to a
fixed order.  All evaluation routines in this package are written once in
jet arithmetic; order 0 is a plain function value, order 1 feeds Newton
iterations, order 2 the critical-point location.
"""

from __future__ import annotations


class Jet:
    """Polynomial truncation of an analytic germ; immutable in practice."""

    __slots__ = ("c",)

    def __init__(self, coeffs):
        self.c = tuple(complex(v) for v in coeffs)

    @classmethod
    def constant(cls, value, order):
        return cls((complex(value),) + (0j,) * order)

    @classmethod
    def variable(cls, z0, order):
        """The germ of z itself at z0."""
        if order == 0:
            return cls((complex(z0),))
        return cls((complex(z0), 1.0 + 0j) + (0j,) * (order - 1))

    @property
    def order(self):
        return len(self.c) - 1

    @property
    def f(self):
        """Function value."""
        return self.c[0]

    def derivative(self, k):
        """k-th derivative encoded by this jet (k <= order)."""
        fact = 1.0
        for j in range(2, k + 1):
            fact *= j
        return self.c[k] * fact

    def _coerce(self, other):
        if isinstance(other, Jet):
            return other
        return Jet.constant(other, self.order)

    def __add__(self, other):
        o = self._coerce(other)
        return Jet(a + b for a, b in zip(self.c, o.c))

    __radd__ = __add__

    def __neg__(self):
        return Jet(-a for a in self.c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Jet):
            w = complex(other)
            return Jet(a * w for a in self.c)
        n = len(self.c)
        out = [0j] * n
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j in range(n - i):
                out[i + j] += a * other.c[j]
        return Jet(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1.0 / complex(other))
        n = len(self.c)
        b0 = other.c[0]
        out = [0j] * n
        for k in range(n):
            acc = self.c[k]
            for j in range(1, k + 1):
                acc -= other.c[j] * out[k - j]
            out[k] = acc / b0
        return Jet(out)

    def __rtruediv__(self, other):
        return Jet.constant(other, self.order) / self

    def __pow__(self, n):
        out = Jet.constant(1.0, self.order)
        for _ in range(int(n)):
            out = out * self
        return out

    def __repr__(self):
        return f"Jet({self.c!r})"
