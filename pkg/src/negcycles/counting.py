"""Exact counts and proportions of elements with only negative cycles.

Every count is evaluated two ways and the routes must agree:

* the Stirling route, summing ``S1(n, k) * 2**(n - k)`` over the cycle
  counts k of the projection to S_n (restricted to even or odd k for W(D_n)
  and its coset);
* the closed route through the rising factorial ``chi_n(x) = x(x+1)...(x+n-1)``
  at ``x = 1/2`` and ``x = -1/2``, which gives ``(2n-1)!!`` and
  ``-(2n-3)!!`` after scaling by ``2**n``.

The Stirling route costs Theta(n^2) big-integer operations, so it is only used
up to ``cross_check_bound`` (2000 by default).  Beyond that the closed route
is checked against the double-factorial product instead.

Big integers are ``gmpy2.mpz``; rationals are ``gmpy2.mpq`` (always reduced).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

import gmpy2
from gmpy2 import mpq, mpz

__all__ = [
    "ConsistencyError",
    "StirlingTable",
    "chi_eval",
    "chi_eval_stirling",
    "count_all_negative_B",
    "count_all_negative_coset",
    "count_all_negative_D",
    "count_all_positive_B",
    "cross_check_bound",
    "double_factorial_odd",
    "format_rational",
    "group_order_B",
    "proportion_p",
    "proportion_p_central",
    "proportion_p_minus",
    "proportion_p_plus",
    "set_cross_check_bound",
    "stirling1_unsigned",
    "stirling_row",
    "stirling_rows",
]

_CROSS_CHECK_BOUND = 2000


class ConsistencyError(ArithmeticError):
    """Two evaluation routes of the same quantity disagreed."""


def cross_check_bound() -> int:
    return _CROSS_CHECK_BOUND


def set_cross_check_bound(bound: int) -> None:
    """Largest n for which counts are recomputed by the Stirling sum."""
    global _CROSS_CHECK_BOUND
    if bound < 0:
        raise ValueError("bound must be non-negative")
    _CROSS_CHECK_BOUND = bound


def _check_rank(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"invalid rank {n!r}: n must be a positive integer")


def format_rational(q) -> str:
    """Render as ``"numerator/denominator"``, e.g. ``"0/1"``."""
    q = mpq(q)
    return f"{q.numerator}/{q.denominator}"


# -- Stirling numbers of the first kind --------------------------------------


def _next_row(row: list, n: int) -> list:
    # row holds S1(n-1, 0..n-1); returns S1(n, 0..n)
    m = n - 1
    out = [mpz(0)] * (n + 1)
    out[n] = row[m]
    for k in range(1, n):
        out[k] = row[k - 1] + m * row[k]
    out[0] = m * row[0]
    return out


def stirling_rows(n_max: int):
    """Yield rows ``S1(n, 0..n)`` for n = 0..n_max, one row in memory at a time."""
    row = [mpz(1)]
    yield row
    for n in range(1, n_max + 1):
        row = _next_row(row, n)
        yield row


class _RowCursor:
    """Most recently computed Stirling row; advances forward in O(n) per step."""

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._n = 0
        self._row = [mpz(1)]

    def row(self, n: int) -> list:
        with self._lock:
            if n < self._n:
                self._n, self._row = 0, [mpz(1)]
            while self._n < n:
                self._n += 1
                self._row = _next_row(self._row, self._n)
            return self._row


_cursor = _RowCursor()


def stirling_row(n: int) -> list:
    """``[S1(n, 0), ..., S1(n, n)]``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return list(_cursor.row(n))


def stirling1_unsigned(n: int, k: int) -> mpz:
    """Number of permutations of n letters with exactly k cycles."""
    if n < 0 or k < 0:
        raise ValueError("n and k must be non-negative")
    if k > n:
        raise ValueError(f"k={k} exceeds n={n}")
    return _cursor.row(n)[k]


@dataclass
class StirlingTable:
    """Triangular table of ``S1(n, k)`` for ``0 <= k <= n <= n_max``."""

    n_max: int
    rows: list = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError("n_max must be positive")
        self.rows = list(stirling_rows(self.n_max))

    def __getitem__(self, nk: tuple[int, int]) -> mpz:
        n, k = nk
        if not 0 <= k <= n <= self.n_max:
            raise IndexError(f"({n}, {k}) outside table of size {self.n_max}")
        return self.rows[n][k]


# -- chi_n and double factorials ----------------------------------------------


def _product(lo: int, hi: int, step: int = 1, offset: int = 0) -> mpz:
    # product of (offset + step*i) for lo <= i < hi, by binary splitting
    if hi - lo <= 8:
        acc = mpz(1)
        for i in range(lo, hi):
            acc *= offset + step * i
        return acc
    mid = (lo + hi) // 2
    return _product(lo, mid, step, offset) * _product(mid, hi, step, offset)


def chi_eval(n: int, x) -> mpq:
    """Exact ``x(x+1)...(x+n-1)`` for rational x."""
    _check_rank(n)
    x = mpq(x)
    a, b = x.numerator, x.denominator
    # x + i = (a + i*b) / b
    return mpq(_product(0, n, int(b), int(a)), b**n)


def chi_eval_stirling(n: int, x) -> mpq:
    """``sum_k S1(n, k) x**k``, the coefficient route to ``chi_n(x)``."""
    _check_rank(n)
    x = mpq(x)
    acc = mpq(0)
    power = mpq(1)
    for c in _cursor.row(n):
        acc += c * power
        power *= x
    return acc


def double_factorial_odd(n: int) -> mpz:
    """``(2n-1)!! = 1*3*5*...*(2n-1)``, with ``(-1)!! = 1`` at n = 0."""
    if n < 0:
        raise ValueError("n must be non-negative")
    return _product(0, n, 2, 1)


def group_order_B(n: int) -> mpz:
    _check_rank(n)
    return gmpy2.fac(n) << n


# -- counts -------------------------------------------------------------------


def _stirling_sums(n: int) -> tuple[mpz, mpz]:
    # (even-k sum, odd-k sum) of S1(n, k) * 2**(n - k)
    even = odd = mpz(0)
    for k, c in enumerate(_cursor.row(n)):
        term = c << (n - k)
        if k % 2:
            odd += term
        else:
            even += term
    return even, odd


def _half_chi_routes(n: int) -> tuple[mpz, mpz]:
    """``2**n chi_n(1/2)`` and ``2**n chi_n(-1/2)`` as integers."""
    scale = mpz(2) ** n
    plus = chi_eval(n, mpq(1, 2)) * scale
    minus = chi_eval(n, mpq(-1, 2)) * scale
    if plus.denominator != 1 or minus.denominator != 1:
        raise ConsistencyError(f"2^n chi_n(+-1/2) not integral at n={n}")
    return plus.numerator, minus.numerator


def _closed_counts(n: int) -> tuple[mpz, mpz, mpz]:
    # (B, D, coset) from the rising factorial at +-1/2
    plus, minus = _half_chi_routes(n)
    total = plus
    even2, odd2 = plus + minus, plus - minus
    if even2 % 2 or odd2 % 2:
        raise ConsistencyError(f"subgroup counts not integral at n={n}")
    return total, even2 // 2, odd2 // 2


def _verified_counts(n: int) -> tuple[mpz, mpz, mpz]:
    _check_rank(n)
    total, even, odd = _closed_counts(n)
    if total != double_factorial_odd(n):
        raise ConsistencyError(f"2^n chi_n(1/2) != (2n-1)!! at n={n}")
    if even + odd != total or even < 0 or odd < 0:
        raise ConsistencyError(f"D/coset split inconsistent at n={n}")
    if n <= _CROSS_CHECK_BOUND:
        s_even, s_odd = _stirling_sums(n)
        if (s_even, s_odd) != (even, odd):
            raise ConsistencyError(
                f"Stirling sums ({s_even}, {s_odd}) disagree with closed forms "
                f"({even}, {odd}) at n={n}"
            )
    return total, even, odd


def count_all_negative_B(n: int) -> mpz:
    """Elements of W(B_n) all of whose cycles are negative: ``(2n-1)!!``."""
    return _verified_counts(n)[0]


def count_all_positive_B(n: int) -> mpz:
    """Elements of W(B_n) all of whose cycles are positive.

    Over each permutation with k cycles the all-positive and all-negative sign
    classes both have 2**(n-k) elements, so the totals coincide.
    """
    return _verified_counts(n)[0]


def count_all_negative_D(n: int) -> mpz:
    """Only-negative elements with an even number of cycles (those in W(D_n))."""
    return _verified_counts(n)[1]


def count_all_negative_coset(n: int) -> mpz:
    """Only-negative elements with an odd number of cycles (outside W(D_n))."""
    return _verified_counts(n)[2]


# -- proportions --------------------------------------------------------------


def proportion_p(n: int) -> mpq:
    """Share of W(B_n) with only negative cycles, ``(2n-1)!! / (2^n n!)``."""
    _check_rank(n)
    return mpq(double_factorial_odd(n), group_order_B(n))


def proportion_p_central(n: int) -> mpq:
    """``(2n)! / (2^n n!)^2``; equal to :func:`proportion_p`."""
    _check_rank(n)
    return mpq(gmpy2.fac(2 * n), (gmpy2.fac(n) << n) ** 2)


def proportion_p_plus(n: int) -> mpq:
    """Share of W(D_n) with only negative cycles, ``p(n) (2n-2)/(2n-1)``."""
    value = proportion_p(n) * mpq(2 * n - 2, 2 * n - 1)
    if n <= _CROSS_CHECK_BOUND:
        direct = mpq(count_all_negative_D(n), group_order_B(n) // 2)
        if direct != value:
            raise ConsistencyError(f"p+({n}): {direct} != {value}")
    return value


def proportion_p_minus(n: int) -> mpq:
    """Share of the coset W(B_n) \\ W(D_n) with only negative cycles, ``p(n) 2n/(2n-1)``."""
    value = proportion_p(n) * mpq(2 * n, 2 * n - 1)
    if n <= _CROSS_CHECK_BOUND:
        direct = mpq(count_all_negative_coset(n), group_order_B(n) // 2)
        if direct != value:
            raise ConsistencyError(f"p-({n}): {direct} != {value}")
    return value
