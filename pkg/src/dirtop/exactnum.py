"""Exact arithmetic over Q and the quadratic field Q(sqrt 2).

Every coordinate, breakpoint and threshold in this package is a
:class:`Scalar`, i.e. a number ``a + b*sqrt(2)`` with rational ``a``, ``b``.
Sign, order and equality are decided exactly, so predicates of the form
"is this ordinate rational?" are genuinely decidable instead of being
floating-point guesses.

The literal grammar accepted by :func:`parse_scalar` (and used by every file
format of this package) is whitespace-insensitive::

    INT                   e.g.  3, -7
    INT/INT               e.g.  1/2, -4/3
    INT/INT + INT/INT r2  e.g.  1/2 + 1/3 r2,  1 - 2 r2,  3r2,  -r2

``r2`` denotes sqrt(2); either component may be omitted.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering
from typing import Union

__all__ = [
    "Rational",
    "Scalar",
    "ScalarLike",
    "ZERO",
    "ONE",
    "SQRT2",
    "compare",
    "parse_scalar",
]

#: Rationals are plain ``fractions.Fraction`` values: arbitrary-precision
#: integers, always reduced (gcd 1, positive denominator).
Rational = Fraction

ScalarLike = Union["Scalar", Fraction, int]

# Rational enclosure of sqrt(2) used only to seed floor(); the returned floor
# is always confirmed by exact comparisons, so the width of the enclosure is
# a performance knob, never a correctness one.
_S = math.isqrt(2 * 10**64)
_SQRT2_LO = Fraction(_S, 10**32)
_SQRT2_HI = Fraction(_S + 1, 10**32)


def _fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


@total_ordering
class Scalar:
    """An element of Q(sqrt 2), stored as ``rat + irr*sqrt(2)``.

    The representation is unique componentwise; a Scalar is rational iff
    ``irr == 0``.  Instances are immutable and hashable.
    """

    __slots__ = ("_rat", "_irr")

    def __init__(self, rat: Fraction | int = 0, irr: Fraction | int = 0) -> None:
        object.__setattr__(self, "_rat", _fraction(rat))
        object.__setattr__(self, "_irr", _fraction(irr))

    def __setattr__(self, name, value):  # pragma: no cover - guard only
        raise AttributeError("Scalar is immutable")

    @property
    def rat(self) -> Fraction:
        return self._rat

    @property
    def irr(self) -> Fraction:
        return self._irr

    @classmethod
    def of(cls, x: ScalarLike) -> Scalar:
        if isinstance(x, Scalar):
            return x
        return cls(_fraction(x))

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: ScalarLike) -> Scalar:
        other = Scalar.of(other)
        return Scalar(self._rat + other._rat, self._irr + other._irr)

    __radd__ = __add__

    def __sub__(self, other: ScalarLike) -> Scalar:
        other = Scalar.of(other)
        return Scalar(self._rat - other._rat, self._irr - other._irr)

    def __rsub__(self, other: ScalarLike) -> Scalar:
        return Scalar.of(other) - self

    def __neg__(self) -> Scalar:
        return Scalar(-self._rat, -self._irr)

    def __mul__(self, other: ScalarLike) -> Scalar:
        other = Scalar.of(other)
        return Scalar(
            self._rat * other._rat + 2 * self._irr * other._irr,
            self._rat * other._irr + self._irr * other._rat,
        )

    __rmul__ = __mul__

    def __truediv__(self, other: ScalarLike) -> Scalar:
        other = Scalar.of(other)
        # 1/(c + d*sqrt2) = (c - d*sqrt2)/(c^2 - 2 d^2); the norm vanishes
        # only at zero because sqrt(2) is irrational.
        norm = other._rat * other._rat - 2 * other._irr * other._irr
        if norm == 0:
            raise ZeroDivisionError("division by zero Scalar")
        num = self * Scalar(other._rat, -other._irr)
        return Scalar(num._rat / norm, num._irr / norm)

    def __rtruediv__(self, other: ScalarLike) -> Scalar:
        return Scalar.of(other) / self

    def __pow__(self, n: int) -> Scalar:
        if not isinstance(n, int) or n < 0:
            return NotImplemented
        out = ONE
        base = self
        while n > 0:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __abs__(self) -> Scalar:
        return -self if self.sign() < 0 else self

    # -- order --------------------------------------------------------

    def sign(self) -> int:
        """Exact sign of ``rat + irr*sqrt(2)``: -1, 0 or +1."""
        a, b = self._rat, self._irr
        if b == 0:
            return -1 if a < 0 else (0 if a == 0 else 1)
        if a == 0:
            return -1 if b < 0 else 1
        sa = 1 if a > 0 else -1
        sb = 1 if b > 0 else -1
        if sa == sb:
            return sa
        # opposite signs: |a| vs sqrt(2)|b| decided by squaring
        lhs, rhs = a * a, 2 * b * b
        if lhs == rhs:
            raise ArithmeticError("sqrt(2) is irrational; a^2 == 2 b^2 with b != 0")
        return sa if lhs > rhs else sb

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (Scalar, int, Fraction)):
            other = Scalar.of(other)
            return self._rat == other._rat and self._irr == other._irr
        return NotImplemented

    def __lt__(self, other: ScalarLike) -> bool:
        return (self - Scalar.of(other)).sign() < 0

    def __hash__(self) -> int:
        if self._irr == 0:
            return hash(self._rat)
        return hash((self._rat, self._irr))

    # -- structure ----------------------------------------------------

    def is_rational(self) -> bool:
        return self._irr == 0

    def is_integer(self) -> bool:
        return self._irr == 0 and self._rat.denominator == 1

    def floor(self) -> int:
        """Largest integer <= self, computed exactly."""
        if self._irr == 0:
            return self._rat.numerator // self._rat.denominator
        if self._irr > 0:
            lo = self._rat + self._irr * _SQRT2_LO
            hi = self._rat + self._irr * _SQRT2_HI
        else:
            lo = self._rat + self._irr * _SQRT2_HI
            hi = self._rat + self._irr * _SQRT2_LO
        flo = lo.numerator // lo.denominator
        fhi = hi.numerator // hi.denominator
        while flo < fhi:
            # exact bisection over the (usually empty) candidate range
            mid = (flo + fhi + 1) // 2
            if Scalar(mid) <= self:
                flo = mid
            else:
                fhi = mid - 1
        return flo

    def ceil(self) -> int:
        return -((-self).floor())

    def __float__(self) -> float:
        return float(self._rat) + float(self._irr) * math.sqrt(2.0)

    # -- formatting ---------------------------------------------------

    def __str__(self) -> str:
        if self._irr == 0:
            return str(self._rat)
        if self._rat == 0:
            head = ""
        else:
            head = f"{self._rat} "
        if self._irr == 1:
            tail = "r2"
        elif self._irr == -1:
            tail = "-r2" if not head else "- r2"
        elif self._irr < 0 and head:
            tail = f"- {-self._irr} r2"
        else:
            tail = f"{self._irr} r2"
        if head and not tail.startswith("-"):
            return f"{head}+ {tail}"
        return f"{head}{tail}"

    def __repr__(self) -> str:
        return f"Scalar({self._rat!r}, {self._irr!r})"


ZERO = Scalar(0)
ONE = Scalar(1)
SQRT2 = Scalar(0, 1)


def compare(a: ScalarLike, b: ScalarLike) -> int:
    """Exact three-way comparison: -1 if a < b, 0 if equal, +1 if a > b."""
    return (Scalar.of(a) - Scalar.of(b)).sign()


def _parse_rational(text: str, original: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad scalar literal {original!r}: {exc}") from None


def parse_scalar(text: str) -> Scalar:
    """Parse the literal grammar: INT, INT/INT, INT/INT + INT/INT r2."""
    original = text
    s = "".join(text.split())
    if not s:
        raise ValueError("empty scalar literal")
    if not s.endswith("r2"):
        return Scalar(_parse_rational(s, original))
    head = s[:-2]
    if head in ("", "+"):
        return SQRT2
    if head == "-":
        return -SQRT2
    # split an explicit inner sign separating the rational and sqrt(2) parts;
    # signs inside a rational only ever occur at its front
    split = None
    for i in range(1, len(head)):
        if head[i] in "+-" and head[i - 1] not in "+-/":
            split = i
    if split is None:
        return Scalar(0, _parse_rational(head, original))
    rat_part, irr_part = head[:split], head[split:]
    if irr_part in ("+", "-"):
        irr = Fraction(f"{irr_part}1")
    else:
        if irr_part.startswith("+"):
            irr_part = irr_part[1:]
        irr = _parse_rational(irr_part, original)
    return Scalar(_parse_rational(rat_part, original), irr)
