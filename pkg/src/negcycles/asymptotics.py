"""Certified comparison of p(n) with h(n) = (1 + 1/(22n)) / sqrt(pi n).

Real quantities are carried as :class:`RealEnclosure` pairs of exact
rationals.  Every operation rounds outward to dyadic rationals with a fixed
number of significant bits, so enclosures stay small while remaining sound.

The bound itself is decided without square roots:
``p(n) < h(n)`` iff ``pi * n * p(n)**2 < (1 + 1/(22n))**2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import gmpy2
from gmpy2 import mpq, mpz

from .counting import format_rational, proportion_p

__all__ = [
    "BoundReport",
    "DEFAULT_PRECISION",
    "MAX_PRECISION",
    "PrecisionError",
    "RealEnclosure",
    "UndecidedError",
    "Verdict",
    "certify_upper_bound",
    "check_stirling_bounds",
    "decimal_string",
    "e_enclosure",
    "h_enclosure",
    "log_grid",
    "pi_enclosure",
    "ratio_p_over_h",
]

DEFAULT_PRECISION = 128
MAX_PRECISION = 4096
GUARD_BITS = 16

# 38 decimals of pi and e, as certified rational brackets
_PI_LO = mpq(314159265358979323846264338327950288419, 10**38)
_PI_HI = mpq(314159265358979323846264338327950288420, 10**38)
_E_LO = mpq(271828182845904523536028747135266249775, 10**38)
_E_HI = mpq(271828182845904523536028747135266249776, 10**38)
_HARDCODED_BITS = 128


class PrecisionError(ArithmeticError):
    """An enclosure could not be made as narrow as requested."""


class UndecidedError(ArithmeticError):
    """An inequality could not be decided at the maximum precision."""


def _floor_bits(q: mpq, bits: int) -> mpq:
    # largest dyadic <= q with `bits` significant bits
    if q == 0:
        return mpq(0)
    num, den = q.numerator, q.denominator
    mag = abs(num).bit_length() - den.bit_length()
    shift = bits - mag
    if shift >= 0:
        return mpq(gmpy2.f_div(num << shift, den), mpz(1) << shift)
    return mpq(gmpy2.f_div(num, den << -shift) << -shift, 1)


def _ceil_bits(q: mpq, bits: int) -> mpq:
    return -_floor_bits(-q, bits)


@dataclass(frozen=True)
class RealEnclosure:
    """A closed interval ``[lower, upper]`` with exact rational endpoints."""

    lower: mpq
    upper: mpq

    def __post_init__(self) -> None:
        lo, hi = mpq(self.lower), mpq(self.upper)
        if lo > hi:
            raise ValueError(f"empty enclosure [{lo}, {hi}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @classmethod
    def exact(cls, q) -> RealEnclosure:
        return cls(mpq(q), mpq(q))

    @property
    def width(self) -> mpq:
        return self.upper - self.lower

    @property
    def midpoint(self) -> mpq:
        return (self.lower + self.upper) / 2

    def contains(self, q) -> bool:
        return self.lower <= q <= self.upper

    def rounded(self, bits: int) -> RealEnclosure:
        """Outward rounding to ``bits`` significant bits."""
        return RealEnclosure(_floor_bits(self.lower, bits), _ceil_bits(self.upper, bits))

    def __add__(self, other) -> RealEnclosure:
        other = _lift(other)
        return RealEnclosure(self.lower + other.lower, self.upper + other.upper)

    __radd__ = __add__

    def __neg__(self) -> RealEnclosure:
        return RealEnclosure(-self.upper, -self.lower)

    def __sub__(self, other) -> RealEnclosure:
        return self + (-_lift(other))

    def __rsub__(self, other) -> RealEnclosure:
        return _lift(other) - self

    def __mul__(self, other) -> RealEnclosure:
        other = _lift(other)
        corners = [
            self.lower * other.lower,
            self.lower * other.upper,
            self.upper * other.lower,
            self.upper * other.upper,
        ]
        return RealEnclosure(min(corners), max(corners))

    __rmul__ = __mul__

    def reciprocal(self) -> RealEnclosure:
        if self.lower <= 0 <= self.upper:
            raise ZeroDivisionError("enclosure contains zero")
        return RealEnclosure(1 / self.upper, 1 / self.lower)

    def __truediv__(self, other) -> RealEnclosure:
        return self * _lift(other).reciprocal()

    def __rtruediv__(self, other) -> RealEnclosure:
        return _lift(other) * self.reciprocal()

    def __pow__(self, k: int) -> RealEnclosure:
        return self.power(k)

    def power(self, k: int, bits: int | None = None) -> RealEnclosure:
        """Non-negative integer power by repeated squaring, for positive enclosures."""
        if k < 0:
            raise ValueError("negative exponent")
        if self.lower < 0:
            raise ValueError("power() expects a non-negative enclosure")
        result = RealEnclosure.exact(1)
        base = self
        while k:
            if k & 1:
                result = result * base
                if bits is not None:
                    result = result.rounded(bits)
            k >>= 1
            if k:
                base = base * base
                if bits is not None:
                    base = base.rounded(bits)
        return result

    def sqrt(self, bits: int) -> RealEnclosure:
        """Enclosure of the square root, each endpoint good to about ``bits`` bits."""
        if self.lower < 0:
            raise ValueError("sqrt of a negative enclosure")
        return RealEnclosure(_isqrt_floor(self.lower, bits), _isqrt_ceil(self.upper, bits))

    def certainly_less(self, other) -> bool:
        return self.upper < _lift(other).lower

    def certainly_greater(self, other) -> bool:
        return self.lower > _lift(other).upper


def _lift(x) -> RealEnclosure:
    return x if isinstance(x, RealEnclosure) else RealEnclosure.exact(x)


def _sqrt_scale(q: mpq, bits: int) -> int:
    mag = max(abs(q.numerator).bit_length() - q.denominator.bit_length(), 0)
    return bits + 2 - mag // 2 + 1


def _isqrt_floor(q: mpq, bits: int) -> mpq:
    if q == 0:
        return mpq(0)
    # sqrt(a/b) = sqrt(a*b) / b, scaled by 2**s
    s = max(_sqrt_scale(q, bits), 0)
    a, b = q.numerator, q.denominator
    root = gmpy2.isqrt((a * b) << (2 * s))
    return mpq(root, b << s)


def _isqrt_ceil(q: mpq, bits: int) -> mpq:
    if q == 0:
        return mpq(0)
    s = max(_sqrt_scale(q, bits), 0)
    a, b = q.numerator, q.denominator
    t = (a * b) << (2 * s)
    root = gmpy2.isqrt(t)
    if root * root != t:
        root += 1
    return mpq(root, b << s)


# -- constants ----------------------------------------------------------------


def _arctan_inv(x: int, bits: int) -> tuple[mpq, mpq]:
    """Bracket arctan(1/x) by consecutive partial sums of the alternating series."""
    target = mpq(1, mpz(1) << (bits + 4))
    partial = mpq(0)
    k = 0
    prev = None
    power = mpz(x)
    x2 = x * x
    while True:
        term = mpq(1, (2 * k + 1) * power)
        prev = partial
        partial = partial + term if k % 2 == 0 else partial - term
        if term < target and k % 2 == 1:
            # partial sums after an odd index are lower bounds, after even upper
            return partial, prev
        power *= x2
        k += 1


@lru_cache(maxsize=16)
def _computed_pi(bits: int) -> RealEnclosure:
    lo5, hi5 = _arctan_inv(5, bits + 8)
    lo239, hi239 = _arctan_inv(239, bits + 8)
    return RealEnclosure(16 * lo5 - 4 * hi239, 16 * hi5 - 4 * lo239)


@lru_cache(maxsize=16)
def _computed_e(bits: int) -> RealEnclosure:
    # sum_{k<=m} 1/k! < e < that + 1/(m! m)
    eps = mpq(1, mpz(1) << (bits + 4))
    partial = mpq(1)
    fact = mpz(1)
    m = 0
    while True:
        m += 1
        fact *= m
        partial += mpq(1, fact)
        tail = mpq(1, fact * m)
        if tail < eps:
            return RealEnclosure(partial, partial + tail)


def pi_enclosure(bits: int = DEFAULT_PRECISION) -> RealEnclosure:
    """Rational bracket of pi with about ``bits`` significant bits."""
    if bits <= _HARDCODED_BITS:
        return RealEnclosure(_PI_LO, _PI_HI).rounded(bits)
    return _computed_pi(bits).rounded(bits)


def e_enclosure(bits: int = DEFAULT_PRECISION) -> RealEnclosure:
    """Rational bracket of e with about ``bits`` significant bits."""
    if bits <= _HARDCODED_BITS:
        return RealEnclosure(_E_LO, _E_HI).rounded(bits)
    return _computed_e(bits).rounded(bits)


# -- h(n) and the bound -------------------------------------------------------


def _check_rank(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"invalid rank {n!r}: n must be a positive integer")


def _correction(n: int) -> mpq:
    return 1 + mpq(1, 22 * n)


def h_enclosure(n: int, precision_bits: int = DEFAULT_PRECISION) -> RealEnclosure:
    """Enclosure of h(n) with relative width at most ``2**-precision_bits``."""
    _check_rank(n)
    if precision_bits < 16:
        raise ValueError("precision_bits must be at least 16")
    work = precision_bits + GUARD_BITS
    root = (pi_enclosure(work) * n).sqrt(work)
    value = (_correction(n) / root).rounded(work)
    if value.width > value.lower / (mpz(1) << precision_bits):
        raise PrecisionError(
            f"h({n}) enclosure too wide at {precision_bits} bits: {float(value.width):.3e}"
        )
    return value


class Verdict(str, enum.Enum):
    CERTIFIED_TRUE = "certified_true"
    CERTIFIED_FALSE = "certified_false"
    UNDECIDED = "undecided"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class BoundReport:
    n: int
    p_value: mpq
    h_enclosure: RealEnclosure
    verdict: Verdict
    precision_bits: int

    def as_record(self) -> dict:
        """Fields in serialization order; rationals and decimals as strings."""
        return {
            "n": self.n,
            "p": format_rational(self.p_value),
            "p_dec": decimal_string(self.p_value, 20),
            "h_lower": decimal_string(self.h_enclosure.lower, 20, "floor"),
            "h_upper": decimal_string(self.h_enclosure.upper, 20, "ceil"),
            "verdict": self.verdict.value,
            "precision_bits": self.precision_bits,
        }


def _squared_verdict(n: int, p: mpq, bits: int) -> Verdict:
    lhs = pi_enclosure(bits) * (n * p * p)
    rhs = _correction(n) ** 2
    if lhs.upper < rhs:
        return Verdict.CERTIFIED_TRUE
    if lhs.lower > rhs:
        return Verdict.CERTIFIED_FALSE
    return Verdict.UNDECIDED


def certify_upper_bound(
    n: int,
    precision_bits: int = DEFAULT_PRECISION,
    max_bits: int = MAX_PRECISION,
) -> BoundReport:
    """Decide ``p(n) < h(n)`` exactly, doubling precision until decided."""
    _check_rank(n)
    p = proportion_p(n)
    bits = precision_bits
    while True:
        verdict = _squared_verdict(n, p, bits)
        if verdict is not Verdict.UNDECIDED or bits >= max_bits:
            break
        bits = min(2 * bits, max_bits)
    h = h_enclosure(n, bits)
    # the squared test and the enclosure must not contradict each other
    if verdict is Verdict.CERTIFIED_TRUE and p > h.upper:
        raise ArithmeticError(f"inconsistent certificate at n={n}")
    return BoundReport(n, p, h, verdict, bits)


def ratio_p_over_h(n: int, precision_bits: int = DEFAULT_PRECISION) -> RealEnclosure:
    """Enclosure of ``p(n) / h(n) = p(n) sqrt(pi n) / (1 + 1/(22n))``."""
    _check_rank(n)
    work = precision_bits + GUARD_BITS
    root = (pi_enclosure(work) * n).sqrt(work)
    return (root * proportion_p(n) / _correction(n)).rounded(work)


def check_stirling_bounds(n: int, precision_bits: int = DEFAULT_PRECISION) -> bool:
    """Certify ``sqrt(2 pi n) (n/e)^n < n! < (1 + 1/(11n)) sqrt(2 pi n) (n/e)^n``.

    Both sides are squared so only pi and e need enclosing.  Returns False if
    either inequality is certified to fail; raises UndecidedError if neither
    outcome can be certified by MAX_PRECISION.
    """
    _check_rank(n)
    fact_sq = gmpy2.fac(n) ** 2
    corr_sq = (1 + mpq(1, 11 * n)) ** 2
    bits = precision_bits
    while True:
        work = max(bits, math.ceil(n * math.log2(n) / 2) + 64 if n > 1 else 64)
        e_pow = e_enclosure(bits).power(2 * n, work)
        base = (pi_enclosure(bits) * (2 * n * mpz(n) ** (2 * n))).rounded(work) / e_pow
        lower_ok = base.certainly_less(fact_sq)
        upper_ok = (base * corr_sq).certainly_greater(fact_sq)
        lower_bad = base.certainly_greater(fact_sq)
        upper_bad = (base * corr_sq).certainly_less(fact_sq)
        if lower_ok and upper_ok:
            return True
        if lower_bad or upper_bad:
            return False
        if bits >= MAX_PRECISION:
            raise UndecidedError(f"Stirling bounds undecided at n={n}, {bits} bits")
        bits = min(2 * bits, MAX_PRECISION)


def log_grid(max_n: int, steps: int) -> list[int]:
    """``steps`` integers log-spaced over ``[1, max_n]``, both ends included."""
    if max_n < 1 or steps < 1:
        raise ValueError("max_n and steps must be positive")
    if steps == 1:
        return [max_n]
    out = []
    for i in range(steps):
        v = round(max_n ** (i / (steps - 1)))
        v = min(max(v, 1), max_n)
        if not out or v > out[-1]:
            out.append(v)
    out[-1] = max_n
    return out


def decimal_string(q, digits: int, rounding: str = "nearest") -> str:
    """Scientific decimal with ``digits`` significant digits.

    ``rounding`` is one of ``nearest``, ``floor`` or ``ceil``; the directed
    modes keep printed bounds on the safe side of the exact value.
    """
    q = mpq(q)
    if q == 0:
        return "0." + "0" * (digits - 1) + "e+00"
    sign = "-" if q < 0 else ""
    a = abs(q)
    num, den = a.numerator, a.denominator
    exp = len(str(num)) - len(str(den))
    # normalise so 10**(digits-1) <= scaled < 10**digits
    while True:
        shift = digits - 1 - exp
        scaled = num * mpz(10) ** shift if shift >= 0 else num
        div = den if shift >= 0 else den * mpz(10) ** (-shift)
        lead = scaled // div
        if lead >= 10**digits:
            exp += 1
        elif lead < 10 ** (digits - 1):
            exp -= 1
        else:
            break
    rem = scaled - lead * div
    mode = rounding
    if q < 0 and rounding in ("floor", "ceil"):
        mode = "ceil" if rounding == "floor" else "floor"
    if rem:
        if mode == "ceil" or (mode == "nearest" and 2 * rem >= div):
            lead += 1
    if lead >= 10**digits:
        lead //= 10
        exp += 1
    s = str(lead)
    return f"{sign}{s[0]}.{s[1:]}e{exp:+03d}"
