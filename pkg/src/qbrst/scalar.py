"""Exact coefficients: rational functions of the deformation parameter q.

Two interchangeable coefficient modes are provided through :class:`Field`:

* symbolic -- every coefficient is a :class:`Scalar`, a reduced fraction of
  univariate polynomials in ``q`` over the rationals;
* numeric  -- ``q`` is fixed to an exact rational ``q0`` and coefficients are
  ``flint.fmpq`` values.

Both kinds support ``+ - * /``, ``==``, truth testing and mixing with ``int``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Union

import flint

Number = Union[int, Fraction, "flint.fmpq"]


class ScalarError(ArithmeticError):
    pass


class ScalarZeroDivision(ScalarError, ZeroDivisionError):
    pass


class PoleError(ScalarError):
    """Evaluation or expansion hit a zero of the denominator."""


def _fmpq(x) -> flint.fmpq:
    if isinstance(x, flint.fmpq):
        return x
    if isinstance(x, int):
        return flint.fmpq(x)
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    raise TypeError(f"not an exact rational: {x!r}")


def _poly(x) -> flint.fmpq_poly:
    if isinstance(x, flint.fmpq_poly):
        return x
    return flint.fmpq_poly([_fmpq(x)])


_ONE = flint.fmpq_poly([1])
_ZERO = flint.fmpq_poly([])


class Scalar:
    """Element of Q(q), kept as num/den with gcd 1 and monic denominator."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num=0, den=None):
        num = _poly(num)
        den = _ONE if den is None else _poly(den)
        if den.is_zero():
            raise ScalarZeroDivision("zero denominator")
        if num.is_zero():
            self.num, self.den = _ZERO, _ONE
        else:
            g = num.gcd(den)
            if not g.is_one():
                num, den = num / g, den / g
            lc = den.leading_coefficient()
            if lc != 1:
                num, den = num / lc, den / lc
            self.num, self.den = num, den
        self._hash = None

    @classmethod
    def q(cls) -> "Scalar":
        return cls(flint.fmpq_poly([0, 1]))

    @staticmethod
    def _coerce(x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        return Scalar(x)

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if self.den == o.den:
            return Scalar(self.num + o.num, self.den)
        return Scalar(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        s = Scalar.__new__(Scalar)
        s.num, s.den, s._hash = -self.num, self.den, None
        return s

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return Scalar(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        if o.num.is_zero():
            raise ScalarZeroDivision("division by zero scalar")
        return Scalar(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            if self.num.is_zero():
                raise ScalarZeroDivision("zero to a negative power")
            return Scalar(self.den**-n, self.num**-n)
        return Scalar(self.num**n, self.den**n)

    # comparison -----------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __bool__(self):
        return not self.num.is_zero()

    def __eq__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((tuple(self.num.coeffs()), tuple(self.den.coeffs())))
        return self._hash

    def is_constant(self) -> bool:
        return self.num.degree() <= 0 and self.den.degree() == 0

    def constant(self) -> flint.fmpq:
        if not self.is_constant():
            raise ScalarError(f"{self} depends on q")
        return self.num[0] if not self.num.is_zero() else flint.fmpq(0)

    # evaluation -----------------------------------------------------------
    def evaluate(self, q0) -> flint.fmpq:
        q0 = _fmpq(q0)
        d = self.den(q0)
        if d == 0:
            raise PoleError(f"pole of {self} at q = {q0}")
        return self.num(q0) / d

    def series_at_one(self, order: int, laurent: bool = False):
        """Taylor coefficients in t = q - 1 up to ``t**order``.

        With ``laurent=True`` a pole at q = 1 is allowed and the result is
        ``(v, coeffs)`` where ``coeffs[0]`` multiplies ``t**v``.
        """
        shift = flint.fmpq_poly([1, 1])
        num, den = self.num(shift), self.den(shift)
        v = 0
        dc = den.coeffs()
        while dc[v] == 0:
            v += 1
        if v and not laurent:
            raise PoleError(f"{self} has a pole of order {v} at q = 1")
        den = flint.fmpq_poly(dc[v:])
        nc = num.coeffs()
        lo = 0
        if laurent and not num.is_zero():
            while nc[lo] == 0:
                lo += 1
            num = flint.fmpq_poly(nc[lo:])
        n_terms = order + 1 + v - lo if laurent else order + 1
        n_terms = max(n_terms, 0)
        # power series division num / den, den[0] != 0
        nc, dc = num.coeffs(), den.coeffs()
        out = []
        for k in range(n_terms):
            acc = nc[k] if k < len(nc) else flint.fmpq(0)
            for j in range(1, min(k, len(dc) - 1) + 1):
                acc -= dc[j] * out[k - j]
            out.append(acc / dc[0])
        if laurent:
            return lo - v, out
        return out

    # text -----------------------------------------------------------------
    def __str__(self):
        n = _poly_str(self.num)
        if self.den.is_one():
            return n
        d = _poly_str(self.den)
        if _n_terms(self.num) > 1 or n.startswith("-"):
            n = f"({n})"
        if _n_terms(self.den) > 1 or "/" in d or "*" in d or "^" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"Scalar({self})"


def _n_terms(p: flint.fmpq_poly) -> int:
    return sum(1 for c in p.coeffs() if c != 0)


def _poly_str(p: flint.fmpq_poly) -> str:
    cs = p.coeffs()
    if not cs:
        return "0"
    parts = []
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = -c if c < 0 else c
        if k == 0:
            body = str(a)
        else:
            mono = "q" if k == 1 else f"q^{k}"
            body = mono if a == 1 else f"{a}*{mono}"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


# the four spec-level operations ---------------------------------------------
def arith(a, b, kind: str):
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    if kind == "div":
        if not b:
            raise ScalarZeroDivision("division by zero")
        return a / b
    raise ValueError(f"unknown arithmetic kind {kind!r}")


def evaluate(a, q0):
    if isinstance(a, Scalar):
        return a.evaluate(q0)
    return _fmpq(a)


def series_at_one(a, order: int, laurent: bool = False):
    return Scalar._coerce(a).series_at_one(order, laurent=laurent)


# coefficient modes -----------------------------------------------------------
class Field:
    """A coefficient mode: symbolic q, or q specialised to an exact rational."""

    def __init__(self, q0=None):
        self.q0 = None if q0 is None else _fmpq(q0)

    @property
    def symbolic(self) -> bool:
        return self.q0 is None

    @property
    def q(self):
        return Scalar.q() if self.symbolic else self.q0

    @property
    def lam(self):
        q = self.q
        return q - 1 / q

    def __call__(self, x):
        """Coerce an int, rational, literal string or Scalar into this mode."""
        if isinstance(x, str):
            from .parse import parse_scalar

            x = parse_scalar(x)
        if isinstance(x, Scalar):
            return x if self.symbolic else x.evaluate(self.q0)
        if self.symbolic:
            return Scalar(x)
        return _fmpq(x)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def describe(self) -> str:
        return "symbolic" if self.symbolic else f"q={self.q0}"

    def __eq__(self, other):
        return isinstance(other, Field) and self.q0 == other.q0

    def __hash__(self):
        return hash(("Field", None if self.q0 is None else (self.q0.p, self.q0.q)))

    def __repr__(self):
        return f"Field({self.describe()})"


SYMBOLIC = Field()


def fmt(x) -> str:
    """Literal string for a coefficient, readable back by ``parse_scalar``."""
    return str(x)
