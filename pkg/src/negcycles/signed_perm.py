"""Signed permutations as elements of the hyperoctahedral group W(B_n).

An element is stored in window notation: ``window[i - 1] = w(i)`` where a
value ``+j`` means ``i -> j`` and ``-j`` means ``i -> j'``.  The action on the
2n points is derived on demand, writing the mirror point ``i'`` as ``-i``, so
that ``w(-p) = -w(p)`` holds by construction.

Composition reads right to left: ``compose(a, b)`` applies ``b`` first.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CycleDecomposition",
    "Permutation",
    "SignVector",
    "SignedPermutation",
    "apply",
    "compose",
    "cycle_decomposition",
    "flip_map",
    "format_element",
    "has_only_negative_cycles",
    "has_only_positive_cycles",
    "identity",
    "in_D",
    "inverse",
    "orbits",
    "parse_element",
    "projection",
    "sign_vector",
]

SignVector = tuple[int, ...]


def _check_rank(n: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(f"invalid rank {n!r}: n must be a positive integer")


@dataclass(frozen=True)
class SignedPermutation:
    """An element of W(B_n) given by the signed images of 1..n."""

    window: tuple[int, ...]

    def __post_init__(self) -> None:
        window = tuple(int(v) for v in self.window)
        object.__setattr__(self, "window", window)
        n = len(window)
        _check_rank(n)
        if sorted(abs(v) for v in window) != list(range(1, n + 1)):
            raise ValueError(
                f"{format_element(window)} is not a signed permutation of 1..{n}"
            )

    @property
    def n(self) -> int:
        return len(self.window)

    def __call__(self, point: int) -> int:
        return apply(self, point)

    def __mul__(self, other: SignedPermutation) -> SignedPermutation:
        return compose(self, other)

    def __str__(self) -> str:
        return format_element(self.window)


@dataclass(frozen=True)
class Permutation:
    """An element of S_n, ``images[i - 1] = x(i)``."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        images = tuple(int(v) for v in self.images)
        object.__setattr__(self, "images", images)
        _check_rank(len(images))
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")

    @property
    def n(self) -> int:
        return len(self.images)

    def cycles(self) -> list[tuple[int, ...]]:
        """Cycles in canonical order: sorted by least element, fixed points included."""
        seen = [False] * (self.n + 1)
        out = []
        for start in range(1, self.n + 1):
            if seen[start]:
                continue
            cyc = []
            i = start
            while not seen[i]:
                seen[i] = True
                cyc.append(i)
                i = self.images[i - 1]
            out.append(tuple(cyc))
        return out

    def compose(self, other: Permutation) -> Permutation:
        if self.n != other.n:
            raise ValueError(f"rank mismatch: {self.n} != {other.n}")
        return Permutation(tuple(self.images[j - 1] for j in other.images))


@dataclass(frozen=True)
class CycleDecomposition:
    """Cycle type of an element.

    ``negative_lengths`` holds one entry k per negative cycle (2k points);
    ``positive_lengths`` holds one entry k per mirrored pair of positive
    k-cycles.  Both are sorted.
    """

    negative_lengths: tuple[int, ...]
    positive_lengths: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(self.negative_lengths) + sum(self.positive_lengths)

    def orbit_sizes(self) -> list[int]:
        """Sizes of the orbits on the 2n points, sorted."""
        sizes = [2 * k for k in self.negative_lengths]
        for k in self.positive_lengths:
            sizes += [k, k]
        return sorted(sizes)


def identity(n: int) -> SignedPermutation:
    _check_rank(n)
    return SignedPermutation(tuple(range(1, n + 1)))


def apply(w: SignedPermutation, point: int) -> int:
    """Image of a point; ``-i`` stands for the mirror point ``i'``."""
    if point == 0 or abs(point) > w.n:
        raise ValueError(f"point {point} out of range for rank {w.n}")
    image = w.window[abs(point) - 1]
    return image if point > 0 else -image


def compose(a: SignedPermutation, b: SignedPermutation) -> SignedPermutation:
    """The product ``a * b``: apply ``b`` first, then ``a``."""
    if a.n != b.n:
        raise ValueError(f"rank mismatch: {a.n} != {b.n}")
    wa = a.window
    return SignedPermutation(
        tuple(wa[v - 1] if v > 0 else -wa[-v - 1] for v in b.window)
    )


def inverse(a: SignedPermutation) -> SignedPermutation:
    inv = [0] * a.n
    for i, v in enumerate(a.window, 1):
        if v > 0:
            inv[v - 1] = i
        else:
            inv[-v - 1] = -i
    return SignedPermutation(tuple(inv))


def projection(w: SignedPermutation) -> Permutation:
    """The induced permutation of the n pairs {i, i'}."""
    return Permutation(tuple(abs(v) for v in w.window))


def _signed_cycles(w: SignedPermutation) -> Iterator[tuple[tuple[int, ...], int]]:
    # (support of a cycle of the projection, product of window signs over it)
    window = w.window
    seen = [False] * (w.n + 1)
    for start in range(1, w.n + 1):
        if seen[start]:
            continue
        support = []
        sign = 1
        i = start
        while not seen[i]:
            seen[i] = True
            support.append(i)
            v = window[i - 1]
            if v < 0:
                sign = -sign
                v = -v
            i = v
        yield tuple(support), sign


def cycle_decomposition(w: SignedPermutation) -> CycleDecomposition:
    """Split ``w`` into negative cycles and pairs of positive cycles.

    A cycle of the projection whose window signs multiply to -1 lifts to a
    single orbit of twice its length containing both ``i`` and ``i'``;
    otherwise it lifts to two mirrored orbits of its own length.
    """
    neg, pos = [], []
    for support, sign in _signed_cycles(w):
        (neg if sign < 0 else pos).append(len(support))
    return CycleDecomposition(tuple(sorted(neg)), tuple(sorted(pos)))


def orbits(w: SignedPermutation) -> list[tuple[int, ...]]:
    """Orbits of ``w`` on the 2n points ``1..n, -1..-n`` by direct iteration."""
    seen = set()
    out = []
    for start in [*range(1, w.n + 1), *range(-1, -w.n - 1, -1)]:
        if start in seen:
            continue
        orbit = [start]
        p = apply(w, start)
        while p != start:
            orbit.append(p)
            p = apply(w, p)
        seen.update(orbit)
        out.append(tuple(orbit))
    return out


def sign_vector(w: SignedPermutation) -> SignVector:
    """The sign sequence s(w), one entry per cycle of ``projection(w)``.

    Cycles are taken in canonical order (least element first).  An entry is
    -1 when a negative cycle of ``w`` lies over that cycle.
    """
    return tuple(sign for _, sign in _signed_cycles(w))


def flip_map(w: SignedPermutation, pairs: Iterable[int]) -> SignedPermutation:
    """Left-multiply ``w`` by the transpositions ``(i, i')`` for ``i`` in ``pairs``."""
    flips = set(pairs)
    for i in flips:
        if not 1 <= i <= w.n:
            raise ValueError(f"pair index {i} out of range 1..{w.n}")
    return SignedPermutation(tuple(-v if abs(v) in flips else v for v in w.window))


def has_only_negative_cycles(w: SignedPermutation) -> bool:
    return all(sign < 0 for _, sign in _signed_cycles(w))


def has_only_positive_cycles(w: SignedPermutation) -> bool:
    return all(sign > 0 for _, sign in _signed_cycles(w))


def in_D(w: SignedPermutation) -> bool:
    """Membership in W(D_n), i.e. an even number of negative cycles.

    The parity of the negative-cycle count equals the parity of the number of
    negative window entries, which is what is tested here.
    """
    return sum(1 for v in w.window if v < 0) % 2 == 0


_ELEMENT_RE = re.compile(r"^\s*\[\s*([+-]?\d+(?:\s*,\s*[+-]?\d+)*)\s*\]\s*$")


def parse_element(text: str) -> SignedPermutation:
    """Parse ``"[-1,+2]"``; a leading ``+`` is optional."""
    m = _ELEMENT_RE.match(text)
    if not m:
        raise ValueError(f"cannot parse signed permutation from {text!r}")
    return SignedPermutation(tuple(int(tok) for tok in m.group(1).split(",")))


def format_element(window: SignedPermutation | Sequence[int]) -> str:
    if isinstance(window, SignedPermutation):
        window = window.window
    return "[" + ",".join(f"{v:+d}" for v in window) + "]"
