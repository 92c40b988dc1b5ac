"""Exact scalars: rationals (``fractions.Fraction``) and cyclotomic numbers.

A cyclotomic number of order ``r`` is stored in the power basis of
``Q[x]/Phi_r(x)``, so equal elements always have equal coefficient tuples.
"""
from __future__ import annotations

import numbers
import re
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Union

from gmpy2 import mpq

Rational = Fraction


# -- dense polynomials over Q, lowest degree first -------------------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_sub(a, b):
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim(Fraction(x) for x in out)


def poly_divmod(a, b):
    a = _trim(Fraction(x) for x in a)
    b = _trim(Fraction(x) for x in b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    lead = b[-1]
    while len(r) >= len(b) and r:
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, y in enumerate(b):
            r[i + shift] -= f * y
        r = _trim(r)
    return _trim(q), r


@lru_cache(maxsize=None)
def cyclotomic_poly(r: int) -> tuple:
    """Coefficients of Phi_r, lowest degree first, by dividing x^r - 1 by Phi_d (d | r, d < r)."""
    if r < 1:
        raise ValueError("cyclotomic order must be positive")
    num = [Fraction(-1)] + [Fraction(0)] * (r - 1) + [Fraction(1)]
    for d in range(1, r):
        if r % d == 0:
            num, rem = poly_divmod(num, cyclotomic_poly(d))
            assert not rem
    return tuple(num)


def euler_phi(r: int) -> int:
    return sum(1 for j in range(1, r + 1) if gcd(j, r) == 1)


# -- cyclotomic field elements -----------------------------------------------

class CycScalar:
    """Element of Q(e) where e is a primitive ``order``-th root of unity."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs=()):
        modulus = cyclotomic_poly(order)
        c = _trim(Fraction(x) for x in coeffs)
        if len(c) >= len(modulus):
            _, c = poly_divmod(c, modulus)
        deg = len(modulus) - 1
        c = list(c) + [Fraction(0)] * (deg - len(c))
        self.order = order
        self.coeffs = tuple(c)

    @classmethod
    def gen(cls, order: int, power: int = 1) -> "CycScalar":
        power %= order
        return cls(order, [0] * power + [1])

    @classmethod
    def const(cls, order: int, value) -> "CycScalar":
        return cls(order, [Fraction(value)])

    def is_rational(self) -> bool:
        return all(x == 0 for x in self.coeffs[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def _coerce(self, other) -> "CycScalar":
        if isinstance(other, CycScalar):
            if other.order != self.order:
                raise ValueError(
                    f"mismatched cyclotomic orders {self.order} and {other.order}")
            return other
        if isinstance(other, numbers.Rational):
            return CycScalar.const(self.order, other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycScalar(self.order, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycScalar(self.order, [-a for a in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, numbers.Rational):
            return CycScalar(self.order, [a * other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CycScalar(self.order, poly_mul(list(self.coeffs), list(o.coeffs)))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        if self == 0:
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        # extended Euclid: s*self + t*Phi = 1
        r0, r1 = list(cyclotomic_poly(self.order)), _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while r1:
            q, rem = poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        # r0 is a nonzero constant since Phi is irreducible
        lead = r0[0]
        return CycScalar(self.order, [x / lead for x in s0])

    def __truediv__(self, other):
        if isinstance(other, numbers.Rational):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return CycScalar(self.order, [a / other for a in self.coeffs])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = CycScalar.const(self.order, 1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, CycScalar):
            return self.order == other.order and self.coeffs == other.coeffs
        if isinstance(other, numbers.Rational):
            return self.is_rational() and self.to_fraction() == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational():
            return hash(self.to_fraction())
        return hash((self.order, self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def __repr__(self):
        return f"CycScalar({self.order}, {format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[int, Fraction, CycScalar]


def field_arith(a: Scalar, b: Scalar, op: str) -> Scalar:
    """Apply ``op`` in {add, mul, div, neg}; rationals embed into cyclotomic fields."""
    if op == "add":
        r = a + b
    elif op == "mul":
        r = a * b
    elif op == "div":
        if b == 0:
            raise ZeroDivisionError("division by zero")
        r = (Fraction(a) / Fraction(b)) if not isinstance(a, CycScalar) and not isinstance(b, CycScalar) else a / b
    elif op == "neg":
        r = -a
    else:
        raise ValueError(f"unknown op {op!r}")
    return normalize(r)


def fast_vec(v: dict) -> dict:
    """Copy of a sparse vector with rational entries stored as ``gmpy2.mpq``.

    ``mpq`` compares and hashes like ``Fraction`` and is much faster in the
    inner loops of the module actions; cyclotomic entries are left alone.
    """
    return {k: (x if isinstance(x, CycScalar) else mpq(x)) for k, x in v.items()}


def normalize(x: Scalar) -> Scalar:
    """Canonical value: ints become Fractions, rational cyclotomics stay cyclotomic."""
    if isinstance(x, int):
        return Fraction(x)
    return x


# -- text form ---------------------------------------------------------------

def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(x: Scalar) -> str:
    """``"p/q"`` for rationals; a polynomial in ``e`` for cyclotomics."""
    if not isinstance(x, CycScalar):
        return _fmt_frac(Fraction(x))
    parts = []
    for power in range(len(x.coeffs) - 1, -1, -1):
        c = x.coeffs[power]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if power == 0:
            body = _fmt_frac(mag)
        else:
            mono = "e" if power == 1 else f"e^{power}"
            body = mono if mag == 1 else f"{_fmt_frac(mag)}*{mono}"
        parts.append((sign, body))
    if not parts:
        return "0"
    head_sign, head = parts[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


_TERM = re.compile(r"^(?:(\d+(?:/\d+)?)\*?)?(e(?:\^(\d+))?)?$")


def parse_scalar(text: str, order: int | None = None) -> Scalar:
    """Parse ``"3/4"`` or (with ``order``) a polynomial such as ``"1/2*e^3 - 2"``."""
    s = str(text).replace(" ", "")
    if not s:
        raise ValueError("empty scalar")
    if "e" not in s:
        value = Fraction(s)
        return CycScalar.const(order, value) if order is not None else value
    if order is None:
        raise ValueError(f"{text!r} uses e but no cyclotomic order is set")
    terms = re.findall(r"[+-]?[^+-]+", s)
    coeffs: dict[int, Fraction] = {}
    for t in terms:
        sign = -1 if t.startswith("-") else 1
        t = t.lstrip("+-")
        m = _TERM.match(t)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"bad scalar term {t!r} in {text!r}")
        c = Fraction(m.group(1)) if m.group(1) else Fraction(1)
        power = 0 if m.group(2) is None else int(m.group(3) or 1)
        coeffs[power] = coeffs.get(power, Fraction(0)) + sign * c
    top = max(coeffs)
    return CycScalar(order, [coeffs.get(i, 0) for i in range(top + 1)])


def as_field(x, order: int | None = None) -> Scalar:
    """Lift ``x`` into the working field Q(e_order).

    For orders 1 and 2 the field is Q itself and values stay ``Fraction``.
    """
    if isinstance(x, CycScalar):
        return x
    if isinstance(x, str):
        if order is None:
            return parse_scalar(x)
        value = parse_scalar(x, order)
        if euler_phi(order) == 1:
            return value.to_fraction() if isinstance(value, CycScalar) else Fraction(value)
        return value
    return Fraction(x)


def primitive_root(order: int) -> Scalar:
    """A primitive ``order``-th root of unity; rational when ``order`` <= 2."""
    if order == 1:
        return Fraction(1)
    if order == 2:
        return Fraction(-1)
    return CycScalar.gen(order)
