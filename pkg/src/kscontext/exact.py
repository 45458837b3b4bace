"""Exact arithmetic in the number field Q(i, sqrt 2).

Every coordinate that appears in the built-in ray sets (0, +-1, +-i, +-sqrt 2,
+-1/2) lives in this field, so orthogonality can be decided without any
floating-point tolerance.
"""

from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

__all__ = ["ExactScalar", "inner_product", "as_vector", "ZERO", "ONE", "I", "SQRT2"]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"expected a rational, got {type(x).__name__}")


class ExactScalar:
    """The number ``(a + b*sqrt2) + i*(c + e*sqrt2)`` with rational a, b, c, e.

    Instances are immutable and hashable. Components are stored as
    :class:`fractions.Fraction`, which keeps every numerator/denominator pair
    reduced with a positive denominator.
    """

    __slots__ = ("_a", "_b", "_c", "_e")

    def __init__(self, re_unit=0, re_sqrt2=0, im_unit=0, im_sqrt2=0) -> None:
        object.__setattr__(self, "_a", _frac(re_unit))
        object.__setattr__(self, "_b", _frac(re_sqrt2))
        object.__setattr__(self, "_c", _frac(im_unit))
        object.__setattr__(self, "_e", _frac(im_sqrt2))

    def __setattr__(self, name, value):
        raise AttributeError("ExactScalar is immutable")

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction, c: Fraction, e: Fraction) -> "ExactScalar":
        obj = object.__new__(cls)
        object.__setattr__(obj, "_a", a)
        object.__setattr__(obj, "_b", b)
        object.__setattr__(obj, "_c", c)
        object.__setattr__(obj, "_e", e)
        return obj

    @classmethod
    def coerce(cls, x) -> "ExactScalar":
        if isinstance(x, ExactScalar):
            return x
        return cls(x)

    @property
    def re_unit(self) -> Fraction:
        return self._a

    @property
    def re_sqrt2(self) -> Fraction:
        return self._b

    @property
    def im_unit(self) -> Fraction:
        return self._c

    @property
    def im_sqrt2(self) -> Fraction:
        return self._e

    @property
    def components(self) -> tuple[Fraction, Fraction, Fraction, Fraction]:
        return (self._a, self._b, self._c, self._e)

    def is_zero(self) -> bool:
        return not (self._a or self._b or self._c or self._e)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactScalar):
            return self.components == other.components
        if isinstance(other, (int, Rational)):
            return self._a == other and not (self._b or self._c or self._e)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.components)

    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, (int, Rational)):
                return NotImplemented
            other = ExactScalar(other)
        return ExactScalar._raw(
            self._a + other._a, self._b + other._b, self._c + other._c, self._e + other._e
        )

    __radd__ = __add__

    def __neg__(self) -> "ExactScalar":
        return ExactScalar._raw(-self._a, -self._b, -self._c, -self._e)

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, (int, Rational)):
                return NotImplemented
            other = ExactScalar(other)
        return ExactScalar._raw(
            self._a - other._a, self._b - other._b, self._c - other._c, self._e - other._e
        )

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            if not isinstance(other, (int, Rational)):
                return NotImplemented
            k = Fraction(other)
            return ExactScalar._raw(self._a * k, self._b * k, self._c * k, self._e * k)
        a, b, c, e = self.components
        p, q, r, s = other.components
        # (x + iy)(u + iv) with x = a + b√2, y = c + e√2, u = p + q√2, v = r + s√2
        xu = (a * p + 2 * b * q, a * q + b * p)
        yv = (c * r + 2 * e * s, c * s + e * r)
        xv = (a * r + 2 * b * s, a * s + b * r)
        yu = (c * p + 2 * e * q, c * q + e * p)
        return ExactScalar._raw(xu[0] - yv[0], xu[1] - yv[1], xv[0] + yu[0], xv[1] + yu[1])

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        return ExactScalar._raw(self._a, self._b, -self._c, -self._e)

    def inverse(self) -> "ExactScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        # z * conj(z) = m + n√2 is real; then (m + n√2)(m - n√2) = m² - 2n² is rational.
        zz = self * self.conjugate()
        m, n = zz._a, zz._b
        norm = m * m - 2 * n * n
        return self.conjugate() * ExactScalar(m / norm, -n / norm)

    def __truediv__(self, other):
        return self * ExactScalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __complex__(self) -> complex:
        r2 = 2**0.5
        return complex(float(self._a) + float(self._b) * r2, float(self._c) + float(self._e) * r2)

    def to_ints(self) -> list[int]:
        """Flatten to ``[a_num, a_den, b_num, b_den, c_num, c_den, e_num, e_den]``."""
        out: list[int] = []
        for f in self.components:
            out.extend((f.numerator, f.denominator))
        return out

    @classmethod
    def from_ints(cls, items: Sequence[int]) -> "ExactScalar":
        if len(items) != 8:
            raise ValueError(f"coordinate needs 8 integers, got {len(items)}")
        if any(isinstance(x, bool) or not isinstance(x, int) for x in items):
            raise ValueError("coordinate entries must be integers")
        dens = items[1::2]
        if any(d <= 0 for d in dens):
            raise ValueError("denominators must be positive")
        return cls(*(Fraction(items[k], items[k + 1]) for k in range(0, 8, 2)))

    def __repr__(self) -> str:
        return f"ExactScalar({self})"

    def __str__(self) -> str:
        def part(u: Fraction, s: Fraction) -> str:
            bits = []
            if u:
                bits.append(str(u))
            if s:
                bits.append(("" if s == 1 else "-" if s == -1 else f"{s}*") + "√2")
            return "+".join(bits).replace("+-", "-") if bits else ""

        re = part(self._a, self._b)
        im = part(self._c, self._e)
        if not re and not im:
            return "0"
        if not im:
            return re
        im_txt = "i" if im == "1" else "-i" if im == "-1" else f"({im})i"
        return f"{re}+{im_txt}".replace("+-", "-") if re else im_txt


ZERO = ExactScalar(0)
ONE = ExactScalar(1)
I = ExactScalar(0, 0, 1)
SQRT2 = ExactScalar(0, 1)


def inner_product(u: Sequence[ExactScalar], v: Sequence[ExactScalar]) -> ExactScalar:
    """Return ``sum_k conj(u_k) * v_k`` exactly."""
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")
    total = ZERO
    for x, y in zip(u, v):
        if x.is_zero() or y.is_zero():
            continue
        total = total + x.conjugate() * y
    return total


def as_vector(entries: Iterable) -> tuple[ExactScalar, ...]:
    return tuple(ExactScalar.coerce(x) for x in entries)
