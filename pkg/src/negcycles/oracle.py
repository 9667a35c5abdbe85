"""Brute-force ground truth by full enumeration of W(B_n) for small n.

Nothing here relies on the sign-product shortcut used in ``signed_perm``:
counts classify each element by its orbits on the 2n points, and the sign
sequence of an element is read off the orbits lying over each cycle of its
projection.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Iterator

import numpy as np
from gmpy2 import mpz

from .signed_perm import (
    Permutation,
    SignedPermutation,
    flip_map,
    has_only_negative_cycles,
    has_only_positive_cycles,
    in_D,
    orbits,
    projection,
)

__all__ = [
    "BruteCounts",
    "COUNT_CAP",
    "FLIP_CAP",
    "FiberPartition",
    "LEMMA_CAP",
    "OracleCapError",
    "brute_counts",
    "brute_counts_scalar",
    "cycle_count_histogram",
    "enumerate_B",
    "fiber_partition",
    "orbit_sign_vector",
    "verify_flip_bijection",
    "verify_lemma",
]

COUNT_CAP = 8
LEMMA_CAP = 6
FLIP_CAP = 5


class OracleCapError(ValueError):
    """Requested rank is above the enumeration cap."""


def _check(n: int, cap: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"invalid rank {n!r}: n must be a positive integer")
    if n > cap:
        size = (1 << n) * math.factorial(n)
        raise OracleCapError(
            f"n={n} exceeds the cap {cap}: W(B_{n}) has {size} elements"
        )


def enumerate_B(n: int, cap: int = COUNT_CAP) -> Iterator[SignedPermutation]:
    """Every element of W(B_n) once: permutations in lexicographic order, then
    sign masks 0..2^n-1 (bit i-1 set means ``w(i)`` is negative)."""
    _check(n, cap)
    for perm in permutations(range(1, n + 1)):
        for mask in range(1 << n):
            yield SignedPermutation(
                tuple(-v if mask >> i & 1 else v for i, v in enumerate(perm))
            )


@dataclass(frozen=True)
class BruteCounts:
    n: int
    total: int
    neg_B: mpz
    neg_D: mpz
    neg_coset: mpz
    pos_B: mpz

    def as_record(self) -> dict:
        return {
            "n": self.n,
            "total": str(self.total),
            "neg_B": str(self.neg_B),
            "neg_D": str(self.neg_D),
            "neg_coset": str(self.neg_coset),
            "pos_B": str(self.pos_B),
        }


def _action_table(perms: np.ndarray, n: int) -> np.ndarray:
    """Point maps for every (permutation, sign mask) pair.

    Points are 0..n-1 for ``1..n`` and n..2n-1 for the mirrors.  Row order is
    permutation-major, mask-minor, matching :func:`enumerate_B`.
    """
    masks = np.arange(1 << n, dtype=np.int64)
    neg = (masks[:, None] >> np.arange(n)) & 1  # (2^n, n)
    targets = perms[:, None, :] - 1 + n * neg[None, :, :]  # images of 0..n-1
    mirror = (targets + n) % (2 * n)  # images of the mirrors
    table = np.concatenate([targets, mirror], axis=2)
    return table.reshape(-1, 2 * n)


def _orbit_labels(table: np.ndarray) -> np.ndarray:
    # least point of each orbit by pointer doubling: after t rounds each label
    # is the minimum over the first 2^t points of the forward path
    rows, m = table.shape
    labels = np.broadcast_to(np.arange(m), (rows, m)).copy()
    jump = table
    reach = 1
    while reach < m:
        np.minimum(labels, np.take_along_axis(labels, jump, axis=1), out=labels)
        jump = np.take_along_axis(jump, jump, axis=1)
        reach *= 2
    return labels


def _classify(table: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    labels = _orbit_labels(table)
    same = labels[:, :n] == labels[:, n:]  # point and mirror share an orbit
    only_neg = same.all(axis=1)
    only_pos = (~same).all(axis=1)
    points = np.arange(2 * n)
    is_min = labels == points
    neg_orbits = (is_min & np.concatenate([same, same], axis=1)).sum(axis=1)
    return only_neg, only_pos, neg_orbits % 2 == 0


def brute_counts(n: int, cap: int = COUNT_CAP, block: int = 720) -> BruteCounts:
    """Count only-negative / only-positive elements over all of W(B_n).

    Permutations are processed in lexicographic blocks with every sign mask;
    accumulators are summed in block order.
    """
    _check(n, cap)
    neg_b = neg_d = neg_c = pos_b = 0
    total = 0
    it = permutations(range(1, n + 1))
    while True:
        chunk = [p for _, p in zip(range(block), it)]
        if not chunk:
            break
        table = _action_table(np.array(chunk, dtype=np.int64), n)
        only_neg, only_pos, even = _classify(table, n)
        total += table.shape[0]
        neg_b += int(only_neg.sum())
        neg_d += int((only_neg & even).sum())
        neg_c += int((only_neg & ~even).sum())
        pos_b += int(only_pos.sum())
    return BruteCounts(n, total, mpz(neg_b), mpz(neg_d), mpz(neg_c), mpz(pos_b))


def brute_counts_scalar(n: int, cap: int = LEMMA_CAP) -> BruteCounts:
    """Same counts, element by element through the ``signed_perm`` predicates."""
    _check(n, cap)
    neg_b = neg_d = neg_c = pos_b = total = 0
    for w in enumerate_B(n, cap):
        total += 1
        if has_only_negative_cycles(w):
            neg_b += 1
            if in_D(w):
                neg_d += 1
            else:
                neg_c += 1
        if has_only_positive_cycles(w):
            pos_b += 1
    return BruteCounts(n, total, mpz(neg_b), mpz(neg_d), mpz(neg_c), mpz(pos_b))


def cycle_count_histogram(n: int, cap: int = 7) -> Counter:
    """Number of elements whose projection has k cycles, for each k."""
    _check(n, cap)
    hist = Counter()
    for w in enumerate_B(n, cap):
        hist[len(projection(w).cycles())] += 1
    return hist


# -- the fiber law ------------------------------------------------------------


def orbit_sign_vector(w: SignedPermutation) -> tuple[int, ...]:
    """s(w) from the orbits of ``w``: -1 over a cycle carrying a negative orbit."""
    over = {}
    for orb in orbits(w):
        negative = any(-p in orb for p in orb)
        for p in orb:
            over[abs(p)] = -1 if negative else 1
    return tuple(over[cyc[0]] for cyc in projection(w).cycles())


@dataclass
class FiberPartition:
    """The preimage of ``base`` split by sign sequence."""

    base: Permutation
    k: int
    buckets: dict = field(default_factory=dict)

    @property
    def size(self) -> int:
        return sum(self.buckets.values())


def _fiber(x: tuple[int, ...]) -> Iterator[SignedPermutation]:
    n = len(x)
    for signs in product((1, -1), repeat=n):
        yield SignedPermutation(tuple(s * v for s, v in zip(signs, x)))


def fiber_partition(x: Permutation) -> FiberPartition:
    part = FiberPartition(x, len(x.cycles()))
    for w in _fiber(x.images):
        s = orbit_sign_vector(w)
        part.buckets[s] = part.buckets.get(s, 0) + 1
    return part


@dataclass
class LemmaFailure:
    base: Permutation
    signs: tuple[int, ...] | None
    count: int
    expected: int


def verify_lemma(n: int, cap: int = LEMMA_CAP, failures: list | None = None) -> bool:
    """Every fiber splits into 2^k sign classes of 2^(n-k) elements each."""
    _check(n, cap)
    for x in permutations(range(1, n + 1)):
        part = fiber_partition(Permutation(x))
        expected = 1 << (n - part.k)
        keys = set(product((1, -1), repeat=part.k))
        bad = None
        if set(part.buckets) != keys:
            missing = sorted(keys - set(part.buckets))
            bad = LemmaFailure(part.base, missing[0] if missing else None, 0, expected)
        else:
            for s, c in sorted(part.buckets.items()):
                if c != expected:
                    bad = LemmaFailure(part.base, s, c, expected)
                    break
        if bad is not None:
            if failures is not None:
                failures.append(bad)
            return False
    return True


def verify_flip_bijection(n: int, cap: int = FLIP_CAP, failures: list | None = None) -> bool:
    """The flip map carries the all-positive class onto every other class.

    For a target s, one pair is flipped per -1 entry (the least point of that
    cycle); the image of the all-positive class must be exactly the s class,
    with no collisions.
    """
    _check(n, cap)
    for x in permutations(range(1, n + 1)):
        base = Permutation(x)
        cycles = base.cycles()
        classes = {}
        for w in _fiber(x):
            classes.setdefault(orbit_sign_vector(w), set()).add(w)
        start = classes.get((1,) * len(cycles), set())
        for s in product((1, -1), repeat=len(cycles)):
            pairs = [cyc[0] for cyc, e in zip(cycles, s) if e < 0]
            image = [flip_map(w, pairs) for w in start]
            target = classes.get(s, set())
            if len(set(image)) != len(image) or set(image) != target:
                if failures is not None:
                    stray = next((w for w in image if w not in target), None)
                    failures.append((base, s, stray))
                return False
    return True
