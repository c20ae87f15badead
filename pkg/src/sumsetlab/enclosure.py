"""Rational enclosures of logarithms, and three-valued comparisons.

Only logarithms of small integers are ever needed; everything else in
the library is exact rational arithmetic.  Each log is bracketed by a
pair of rationals obtained from MPFR evaluations under downward and
upward rounding (correctly rounded, so the bracket is sound), then the
bracket is pushed through interval arithmetic.  Comparisons against
exact rationals return a verdict that is "holds" or "fails" only when
provable from the bracket, and "indeterminate" when the bracket
straddles the threshold.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2

from .intervals import RatLike, as_fraction

PRECISION_BITS = 256


class Verdict(str, enum.Enum):
    HOLDS = "holds"
    FAILS = "fails"
    INDETERMINATE = "indeterminate"


@dataclass(frozen=True, slots=True)
class Bracket:
    """A closed rational interval [lo, hi] certified to contain a value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("bracket endpoints out of order")

    @classmethod
    def exact(cls, x: RatLike) -> "Bracket":
        x = as_fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def __add__(self, other: "Bracket | RatLike") -> "Bracket":
        other = _bracket(other)
        return Bracket(self.lo + other.lo, self.hi + other.hi)

    def __radd__(self, other: RatLike) -> "Bracket":
        return self + other

    def __neg__(self) -> "Bracket":
        return Bracket(-self.hi, -self.lo)

    def __sub__(self, other: "Bracket | RatLike") -> "Bracket":
        return self + (-_bracket(other))

    def __rsub__(self, other: RatLike) -> "Bracket":
        return _bracket(other) + (-self)

    def __mul__(self, other: "Bracket | RatLike") -> "Bracket":
        other = _bracket(other)
        products = [
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        ]
        return Bracket(min(products), max(products))

    def __rmul__(self, other: RatLike) -> "Bracket":
        return self * other

    def compare_lt(self, threshold: RatLike) -> Verdict:
        """Is (value) < threshold?  Provable-only semantics."""
        threshold = as_fraction(threshold)
        if self.hi < threshold:
            return Verdict.HOLDS
        if self.lo >= threshold:
            return Verdict.FAILS
        return Verdict.INDETERMINATE

    def compare_le(self, threshold: RatLike) -> Verdict:
        threshold = as_fraction(threshold)
        if self.hi <= threshold:
            return Verdict.HOLDS
        if self.lo > threshold:
            return Verdict.FAILS
        return Verdict.INDETERMINATE


def _bracket(x: "Bracket | RatLike") -> Bracket:
    if isinstance(x, Bracket):
        return x
    return Bracket.exact(x)


def _mpfr_to_fraction(value: "gmpy2.mpfr") -> Fraction:
    # Binary floats convert to rationals exactly.
    q = gmpy2.mpq(value)
    return Fraction(int(q.numerator), int(q.denominator))


@lru_cache(maxsize=None)
def log_bracket(n: int, bits: int = PRECISION_BITS) -> Bracket:
    """Sound rational bracket around ln(n) for a positive integer n.

    MPFR results are correctly rounded in the requested direction, so
    the downward and upward evaluations bracket the true value.
    """
    if n < 1:
        raise ValueError("log_bracket requires a positive integer")
    if n == 1:
        return Bracket.exact(0)
    with gmpy2.context(precision=bits, round=gmpy2.RoundDown):
        lo = gmpy2.log(gmpy2.mpfr(n))
    with gmpy2.context(precision=bits, round=gmpy2.RoundUp):
        hi = gmpy2.log(gmpy2.mpfr(n))
    bracket = Bracket(_mpfr_to_fraction(lo), _mpfr_to_fraction(hi))
    assert bracket.lo < bracket.hi
    return bracket


def verdict_all(*verdicts: Verdict) -> Verdict:
    """Conjunction: holds only if every part holds, fails if any part
    provably fails, indeterminate otherwise."""
    for v in verdicts:
        if not isinstance(v, Verdict):
            raise TypeError(f"expected a Verdict, got {type(v).__name__}")
    if any(v is Verdict.FAILS for v in verdicts):
        return Verdict.FAILS
    if all(v is Verdict.HOLDS for v in verdicts):
        return Verdict.HOLDS
    return Verdict.INDETERMINATE
