"""Exact scalar arithmetic over Q and the cyclotomic fields Q(zeta_N).

Rational scalars are plain ``fractions.Fraction`` values.  Roots of unity
live in ``Cyclotomic``: an element of Q[x]/(Phi_N(x)) where Phi_N is the
N-th cyclotomic polynomial, so the representation is a field and every
nonzero element has an exact inverse.  Arithmetic between different
orders lifts both operands to the least common multiple order.  Results
whose reduced representative is a constant polynomial are demoted back
to ``Fraction``, which keeps computations rational whenever possible
(for twist order 2, for instance, every root of unity is +-1).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm

Rational = Fraction

Scalar = "Fraction | Cyclotomic"


class ScalarError(ArithmeticError):
    """Raised for undefined scalar operations such as inverting zero."""


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise ScalarError(f"not a rational value: {x!r}")


# -- dense polynomial helpers over Q (coefficient lists, low degree first) --

def _ptrim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] += ca * cb
    return _ptrim(out)


def _psub(a, b):
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _ptrim(out)


def _pdivmod(a, b):
    """Quotient and remainder of a by b."""
    a = _ptrim(list(a))
    b = _ptrim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    qlen = max(len(a) - len(b) + 1, 0)
    q = [Fraction(0)] * qlen
    inv_lead = 1 / Fraction(b[-1])
    for d in range(qlen - 1, -1, -1):
        idx = d + len(b) - 1
        c = a[idx] * inv_lead if idx < len(a) else Fraction(0)
        if c:
            q[d] = c
            for i, cb in enumerate(b):
                a[d + i] -= c * cb
    return _ptrim(q), _ptrim(a)


def _pext_inverse(a, mod):
    """Inverse of a modulo mod in Q[x] via the extended Euclid algorithm."""
    # invariant: r0 = s0*a (mod mod) and r1 = s1*a (mod mod)
    r0, r1 = _ptrim(list(mod)), _ptrim(list(a))
    s0, s1 = [], [Fraction(1)]
    while r1:
        q, r = _pdivmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1))
    if len(r0) != 1:
        raise ScalarError("element is not invertible")
    g = r0[0]
    return _ptrim([c / g for c in s0])


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, low degree first, as exact fractions."""
    if n < 1:
        raise ScalarError("order must be positive")
    # x^n - 1 divided by the product of Phi_d over proper divisors d of n
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    den = [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            den = _pmul(den, list(cyclotomic_polynomial(d)))
    q, r = _pdivmod(num, den)
    assert not r, "cyclotomic division must be exact"
    return tuple(q)


class Cyclotomic:
    """An element of Q(zeta_N) stored as a reduced polynomial in zeta_N.

    zeta_N denotes e^(2*pi*i/N).  ``coeffs`` maps exponents in
    0..deg(Phi_N)-1 to nonzero Fractions.
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: dict):
        self.order = order
        self.coeffs = {e: as_fraction(c) for e, c in coeffs.items() if c}

    # -- construction -------------------------------------------------

    @staticmethod
    def _reduce(order: int, dense: list):
        phi = list(cyclotomic_polynomial(order))
        _, rem = _pdivmod(dense, phi)
        return {e: c for e, c in enumerate(rem) if c}

    @classmethod
    def from_dense(cls, order: int, dense: list):
        return _demote(cls(order, cls._reduce(order, [as_fraction(c) for c in dense])))

    @classmethod
    def from_rational(cls, order: int, value) -> "Cyclotomic":
        return cls(order, {0: as_fraction(value)})

    def _dense(self):
        d = [Fraction(0)] * (len(cyclotomic_polynomial(self.order)) - 1)
        for e, c in self.coeffs.items():
            d[e] = c
        return d

    def lift(self, order: int) -> "Cyclotomic":
        """Re-express in Q(zeta_order); self.order must divide order."""
        if order == self.order:
            return self
        if order % self.order:
            raise ScalarError("can only lift to a multiple order")
        step = order // self.order
        dense = [Fraction(0)] * (max(self.coeffs, default=0) * step + 1)
        for e, c in self.coeffs.items():
            dense[e * step] = c
        return Cyclotomic(order, self._reduce(order, dense))

    # -- arithmetic ----------------------------------------------------

    @staticmethod
    def _coerce_pair(a, b):
        if isinstance(b, (int, Fraction)):
            b = Cyclotomic.from_rational(a.order, b)
        elif not isinstance(b, Cyclotomic):
            return None, None
        n = lcm(a.order, b.order)
        return a.lift(n), b.lift(n)

    def __add__(self, other):
        a, b = self._coerce_pair(self, other)
        if a is None:
            return NotImplemented
        out = dict(a.coeffs)
        for e, c in b.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return _demote(Cyclotomic(a.order, out))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.order, {e: -c for e, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, Cyclotomic) else -as_fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return _demote(Cyclotomic(self.order,
                                      {e: c * other for e, c in self.coeffs.items()}))
        a, b = self._coerce_pair(self, other)
        if a is None:
            return NotImplemented
        dense = _pmul(a._dense(), b._dense())
        return Cyclotomic.from_dense(a.order, dense or [0])

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        if not self.coeffs:
            raise ScalarError("division by zero")
        phi = list(cyclotomic_polynomial(self.order))
        inv = _pext_inverse(self._dense(), phi)
        return Cyclotomic.from_dense(self.order, inv)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / as_fraction(other))
        if isinstance(other, Cyclotomic):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out, base = Fraction(1), self
        while n:
            if n & 1:
                out = base * out
            base = base * base
            n >>= 1
        return out

    # -- comparison and hashing ----------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            # a surviving Cyclotomic is never a constant (demotion)
            return not self.coeffs and other == 0
        if isinstance(other, Cyclotomic):
            a, b = self._coerce_pair(self, other)
            return a.coeffs == b.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.order, tuple(sorted(self.coeffs.items()))))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "Cyclotomic(0)"
        parts = [f"{c}*z{self.order}^{e}" for e, c in sorted(self.coeffs.items())]
        return " + ".join(parts)


def _demote(c: Cyclotomic):
    """Collapse constant representatives to plain fractions."""
    if not c.coeffs:
        return Fraction(0)
    if set(c.coeffs) == {0}:
        return c.coeffs[0]
    return c


def root_of_unity(order: int, j: int):
    """zeta_order^j as an exact scalar, demoted to a Fraction when rational."""
    if order < 1:
        raise ScalarError("order must be positive")
    j %= order
    dense = [Fraction(0)] * j + [Fraction(1)]
    return Cyclotomic.from_dense(order, dense)


def eta_power(k: int, j: int):
    """eta^j for eta = e^(-2*pi*i/k), the primitive root used in twists."""
    return root_of_unity(k, -j)


def field_arith(a, b, op: str):
    """Dispatch helper for the three basic field operations.

    ``op`` is one of ``add``, ``mul``, ``inv``; for ``inv`` the second
    operand is ignored.
    """
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        if isinstance(a, Cyclotomic):
            return a.inverse()
        a = as_fraction(a)
        if not a:
            raise ScalarError("division by zero")
        return 1 / a
    raise ScalarError(f"unknown operation {op!r}")


# -- JSON encoding ------------------------------------------------------

def scalar_to_json(x):
    if isinstance(x, int):
        x = Fraction(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}" if x.denominator != 1 else str(x.numerator)
    if isinstance(x, Cyclotomic):
        return {"order": x.order,
                "coeffs": {str(e): scalar_to_json(c) for e, c in sorted(x.coeffs.items())}}
    raise ScalarError(f"not a scalar: {x!r}")


def scalar_from_json(obj):
    if isinstance(obj, str):
        return Fraction(obj)
    if isinstance(obj, dict):
        return _demote(Cyclotomic(obj["order"],
                                  {int(e): Fraction(c) for e, c in obj["coeffs"].items()}))
    raise ScalarError(f"not an encoded scalar: {obj!r}")
