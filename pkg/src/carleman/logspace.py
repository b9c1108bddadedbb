"""Signed logarithmic scalars.

Weight sequences like q^(k^2) and products k! * M_k leave the range of double
precision near k ~ 30, so every growth-sensitive quantity in this package is
carried as a pair (sign, ln|x|).  This module is the arithmetic kernel for
those pairs; it follows the usual log-sum-exp discipline with explicit sign
bookkeeping so that partial cancellation stays well defined.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction


def log_factorial(k: int) -> float:
    """ln(k!) via the log-gamma function (exact for k = 0, 1)."""
    if k < 0:
        raise ValueError(f"negative factorial argument {k}")
    return math.lgamma(k + 1)


def log_binomial(n: int, k: int) -> float:
    """ln C(n, k); -inf outside the Pascal triangle."""
    if k < 0 or k > n:
        return -math.inf
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k)


def _log_int(n: int) -> float:
    # math.log accepts arbitrary-precision ints, so huge numerators are fine.
    if n == 0:
        return -math.inf
    return math.log(n)


@dataclass(frozen=True, slots=True)
class SignedLog:
    """A real number stored as (sign, ln|x|).

    sign is -1, 0 or +1; when sign == 0 the magnitude field is ignored and
    canonicalised to -inf so equality behaves.
    """

    sign: int
    log_mag: float

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign}")
        if math.isnan(self.log_mag):
            raise ValueError("log magnitude is NaN")
        if self.sign == 0 and self.log_mag != -math.inf:
            object.__setattr__(self, "log_mag", -math.inf)
        if self.sign != 0 and self.log_mag == -math.inf:
            object.__setattr__(self, "sign", 0)

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_float(cls, value: float) -> "SignedLog":
        if value == 0:
            return ZERO
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @classmethod
    def from_fraction(cls, value: Fraction) -> "SignedLog":
        num, den = value.numerator, value.denominator
        if num == 0:
            return ZERO
        sign = 1 if num > 0 else -1
        return cls(sign, _log_int(abs(num)) - _log_int(den))

    @classmethod
    def from_log(cls, log_mag: float, sign: int = 1) -> "SignedLog":
        return cls(sign, log_mag)

    # -- views -------------------------------------------------------------

    @property
    def value(self) -> float:
        """Best-effort float value; overflows to +-inf."""
        if self.sign == 0:
            return 0.0
        try:
            return self.sign * math.exp(self.log_mag)
        except OverflowError:
            return self.sign * math.inf

    def is_zero(self) -> bool:
        return self.sign == 0

    def __repr__(self) -> str:
        return f"SignedLog({self.sign:+d}, {self.log_mag!r})"

    # -- arithmetic ---------------------------------------------------------

    def __neg__(self) -> "SignedLog":
        if self.sign == 0:
            return self
        return SignedLog(-self.sign, self.log_mag)

    def __abs__(self) -> "SignedLog":
        if self.sign == -1:
            return SignedLog(1, self.log_mag)
        return self

    def __add__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        a, b = self, other
        if a.log_mag < b.log_mag:
            a, b = b, a
        d = b.log_mag - a.log_mag  # <= 0
        if a.sign == b.sign:
            return SignedLog(a.sign, a.log_mag + math.log1p(math.exp(d)))
        if d == 0.0:
            return ZERO  # exact cancellation of equal magnitudes
        q = math.exp(d)
        if q == 1.0:
            return ZERO
        return SignedLog(a.sign, a.log_mag + math.log1p(-q))

    def __sub__(self, other: "SignedLog") -> "SignedLog":
        return self + (-other)

    def __mul__(self, other: "SignedLog") -> "SignedLog":
        if self.sign == 0 or other.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.log_mag + other.log_mag)

    def __truediv__(self, other: "SignedLog") -> "SignedLog":
        if other.sign == 0:
            raise ZeroDivisionError("division by signed-log zero")
        if self.sign == 0:
            return ZERO
        return SignedLog(self.sign * other.sign, self.log_mag - other.log_mag)

    def __pow__(self, n: int) -> "SignedLog":
        if not isinstance(n, int):
            raise TypeError("only integer powers are supported")
        if n == 0:
            return ONE
        if self.sign == 0:
            if n < 0:
                raise ZeroDivisionError("zero to a negative power")
            return ZERO
        sign = self.sign if n % 2 else 1
        return SignedLog(sign, self.log_mag * n)

    # -- ordering (by represented value) ------------------------------------

    def __lt__(self, other: "SignedLog") -> bool:
        if self.sign != other.sign:
            return self.sign < other.sign
        if self.sign == 0:
            return False
        if self.sign > 0:
            return self.log_mag < other.log_mag
        return self.log_mag > other.log_mag

    def __le__(self, other: "SignedLog") -> bool:
        return self == other or self < other


ZERO = SignedLog(0, -math.inf)
ONE = SignedLog(1, 0.0)


def signed_log_sum(values) -> SignedLog:
    """Left-to-right fold; order is fixed so results are bit-deterministic."""
    total = ZERO
    for v in values:
        total = total + v
    return total
