"""Uniform sampling from W(B_n), W(D_n) and the coset, and Monte Carlo estimates.

Randomness comes from numpy's PCG64 read as a stream of raw 32-bit words.
Permutations are drawn by Fisher-Yates with Lemire's multiply-and-reject
bounded integers (no modulo bias); signs are taken bit by bit from whole
words.  The hot loops are numba kernels that consume words from a buffer and
stop cleanly when it runs dry, so a stream yields the same elements whatever
batch sizes it is read with.

Estimates split the trials into fixed blocks of ``BLOCK_TRIALS``; block ``b``
reads its own stream seeded with ``seed ^ b``.  Blocks may run on any number
of threads and their hit counts are summed in block order, so a report
depends only on (selector, n, trials, seed).
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from statistics import NormalDist

import numba
import numpy as np
from gmpy2 import mpq

from .counting import format_rational, proportion_p, proportion_p_minus, proportion_p_plus
from .signed_perm import SignedPermutation

__all__ = [
    "BLOCK_TRIALS",
    "EstimateReport",
    "GroupSelector",
    "WordStream",
    "count_only_negative",
    "estimate_proportion",
    "sample",
    "sample_B",
    "sample_D",
    "sample_batch",
    "sample_coset",
    "wilson_interval",
]

BLOCK_TRIALS = 1 << 16
_SEED_MASK = (1 << 64) - 1
_Z95 = NormalDist().inv_cdf(0.975)


class GroupSelector(str, enum.Enum):
    B = "B"
    D = "D"
    COSET = "coset"

    def __str__(self) -> str:
        return self.value

    @property
    def mode(self) -> int:
        return _MODES[self]

    def exact(self, n: int) -> mpq:
        if self is GroupSelector.B:
            return proportion_p(n)
        if self is GroupSelector.D:
            return proportion_p_plus(n)
        return proportion_p_minus(n)


_MODES = {GroupSelector.B: 0, GroupSelector.D: 1, GroupSelector.COSET: 2}


# -- kernels ------------------------------------------------------------------


@numba.njit(cache=True, nogil=True)
def _draw_rows(words, pos, n, mode, out, row_start):
    """Fill ``out[row_start:]`` with window rows; return (rows written, new pos).

    Stops before a row that could not be finished with the words left; that
    row is redrawn from the same position after a refill.
    """
    nwords = words.shape[0]
    rows = out.shape[0]
    nsigns = n if mode == 0 else n - 1
    sign_words = (nsigns + 31) // 32
    perm = np.empty(n, np.int64)
    r = row_start
    while r < rows:
        p = pos
        for i in range(n):
            perm[i] = i + 1
        ok = True
        for i in range(n - 1, 0, -1):
            bound = np.uint64(i + 1)
            if p >= nwords:
                ok = False
                break
            m = np.uint64(words[p]) * bound
            p += 1
            low = m & np.uint64(0xFFFFFFFF)
            if low < bound:
                thresh = (np.uint64(0x100000000) - bound) % bound
                while low < thresh:
                    if p >= nwords:
                        ok = False
                        break
                    m = np.uint64(words[p]) * bound
                    p += 1
                    low = m & np.uint64(0xFFFFFFFF)
                if not ok:
                    break
            j = np.int64(m >> np.uint64(32))
            t = perm[i]
            perm[i] = perm[j]
            perm[j] = t
        if not ok or p + sign_words > nwords:
            return r - row_start, pos
        negatives = 0
        for i in range(nsigns):
            bit = (words[p + i // 32] >> np.uint32(i % 32)) & np.uint32(1)
            if bit:
                out[r, i] = -perm[i]
                negatives += 1
            else:
                out[r, i] = perm[i]
        p += sign_words
        if mode != 0:
            want_odd = 1 if mode == 2 else 0
            if negatives % 2 != want_odd:
                out[r, n - 1] = -perm[n - 1]
            else:
                out[r, n - 1] = perm[n - 1]
        pos = p
        r += 1
    return r - row_start, pos


@numba.njit(cache=True, nogil=True)
def _count_only_negative(windows):
    rows, n = windows.shape
    seen = np.zeros(n + 1, np.bool_)
    hits = 0
    for r in range(rows):
        for i in range(1, n + 1):
            seen[i] = False
        good = True
        for start in range(1, n + 1):
            if seen[start]:
                continue
            negative = False
            i = start
            while not seen[i]:
                seen[i] = True
                v = windows[r, i - 1]
                if v < 0:
                    negative = not negative
                    v = -v
                i = v
            if not negative:
                good = False
                break
        if good:
            hits += 1
    return hits


def count_only_negative(windows: np.ndarray) -> int:
    """Number of rows (windows) with only negative cycles."""
    windows = np.ascontiguousarray(windows, dtype=np.int64)
    if windows.ndim != 2:
        raise ValueError("expected a 2-d array of windows")
    return int(_count_only_negative(windows))


# -- streams ------------------------------------------------------------------


class WordStream:
    """Reproducible stream of 32-bit words from PCG64 seeded with ``seed``.

    A 64-bit raw output contributes its low half first, then its high half.
    """

    def __init__(self, seed: int, chunk: int = 1 << 14):
        if not 0 <= seed <= _SEED_MASK:
            raise ValueError("seed must be a 64-bit unsigned integer")
        self.seed = seed
        self._bitgen = np.random.PCG64(seed)
        self._chunk = chunk
        self._buf = np.empty(0, np.uint32)
        self._pos = 0

    def _refill(self, at_least: int) -> None:
        k = max(self._chunk, (at_least + 1) // 2)
        raw = self._bitgen.random_raw(k).astype("<u8", copy=False)
        fresh = raw.view("<u4").astype(np.uint32, copy=False)
        self._buf = np.concatenate([self._buf[self._pos:], fresh])
        self._pos = 0

    def draw(self, n: int, mode: int, count: int) -> np.ndarray:
        out = np.empty((count, n), np.int64)
        done = 0
        expected = count * (n + n // 32 + 2)
        while done < count:
            if self._buf.shape[0] - self._pos < 64:
                self._refill(expected)
            made, self._pos = _draw_rows(self._buf, self._pos, n, mode, out, done)
            done += made
            if done < count:
                self._refill(max(64, (count - done) * (n + n // 32 + 2)))
        return out


def _check_rank(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"invalid rank {n!r}: n must be a positive integer")


def sample_batch(selector, n: int, count: int, stream: WordStream) -> np.ndarray:
    """``count`` independent uniform elements as rows of windows."""
    _check_rank(n)
    return stream.draw(n, GroupSelector(selector).mode, count)


def sample(selector, n: int, stream: WordStream) -> SignedPermutation:
    return SignedPermutation(tuple(int(v) for v in sample_batch(selector, n, 1, stream)[0]))


def sample_B(n: int, stream: WordStream) -> SignedPermutation:
    """Uniform element of W(B_n): a shuffled permutation with n fair signs."""
    return sample(GroupSelector.B, n, stream)


def sample_D(n: int, stream: WordStream) -> SignedPermutation:
    """Uniform element of W(D_n); the last sign makes the sign product +1."""
    return sample(GroupSelector.D, n, stream)


def sample_coset(n: int, stream: WordStream) -> SignedPermutation:
    """Uniform element of W(B_n) outside W(D_n)."""
    return sample(GroupSelector.COSET, n, stream)


# -- estimation ---------------------------------------------------------------


def wilson_interval(hits: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    if trials < 1 or not 0 <= hits <= trials:
        raise ValueError("need 0 <= hits <= trials and trials >= 1")
    phat = hits / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials)) / denom
    low = max(0.0, centre - half)
    high = min(1.0, centre + half)
    # keep the estimate inside despite rounding at the edges
    return min(low, phat), max(high, phat)


@dataclass(frozen=True)
class EstimateReport:
    selector: GroupSelector
    n: int
    trials: int
    hits: int
    estimate: mpq
    exact: mpq
    ci_low: float
    ci_high: float
    seed: int
    z_score: float

    @property
    def degenerate(self) -> bool:
        return self.exact in (0, 1)

    def as_record(self) -> dict:
        """JSON-ready fields in the documented order."""
        z = self.z_score
        return {
            "selector": self.selector.value,
            "n": self.n,
            "trials": self.trials,
            "hits": self.hits,
            "estimate": format_rational(self.estimate),
            "exact": format_rational(self.exact),
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "seed": self.seed,
            "z_score": z if math.isfinite(z) else ("inf" if z > 0 else "-inf"),
        }


def _block_hits(selector: GroupSelector, n: int, seed: int, block: int, size: int) -> int:
    stream = WordStream(seed ^ block)
    hits = 0
    step = 1 << 14
    done = 0
    while done < size:
        m = min(step, size - done)
        hits += int(_count_only_negative(stream.draw(n, selector.mode, m)))
        done += m
    return hits


def z_score(estimate: mpq, exact: mpq, trials: int) -> float:
    if exact == 0 or exact == 1:
        if estimate == exact:
            return 0.0
        return math.inf if estimate > exact else -math.inf
    var = float(exact * (1 - exact)) / trials
    return float(estimate - exact) / math.sqrt(var)


def estimate_proportion(
    selector, n: int, trials: int, seed: int, workers: int = 1
) -> EstimateReport:
    """Monte Carlo estimate of the only-negative share of the selected set."""
    selector = GroupSelector(selector)
    _check_rank(n)
    if trials < 1:
        raise ValueError("trials must be positive")
    if not 0 <= seed <= _SEED_MASK:
        raise ValueError("seed must be a 64-bit unsigned integer")
    blocks = [
        (b, min(BLOCK_TRIALS, trials - b * BLOCK_TRIALS))
        for b in range(-(-trials // BLOCK_TRIALS))
    ]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(
                pool.map(lambda bs: _block_hits(selector, n, seed, *bs), blocks)
            )
    else:
        counts = [_block_hits(selector, n, seed, b, size) for b, size in blocks]
    hits = sum(counts)
    estimate = mpq(hits, trials)
    exact = selector.exact(n)
    low, high = wilson_interval(hits, trials)
    return EstimateReport(
        selector=selector,
        n=n,
        trials=trials,
        hits=hits,
        estimate=estimate,
        exact=exact,
        ci_low=low,
        ci_high=high,
        seed=seed,
        z_score=z_score(estimate, exact, trials),
    )
