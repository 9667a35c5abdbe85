from itertools import islice, permutations, product

import pytest

from negcycles import oracle
from negcycles.counting import (
    count_all_negative_B,
    count_all_negative_coset,
    count_all_negative_D,
    count_all_positive_B,
    group_order_B,
    stirling1_unsigned,
)
from negcycles.oracle import (
    BruteCounts,
    OracleCapError,
    brute_counts,
    brute_counts_scalar,
    cycle_count_histogram,
    enumerate_B,
    fiber_partition,
    orbit_sign_vector,
    verify_flip_bijection,
    verify_lemma,
)
from negcycles.signed_perm import Permutation, SignedPermutation, flip_map, sign_vector

from conftest import all_elements

W = SignedPermutation


# -- enumeration --------------------------------------------------------------


@pytest.mark.parametrize("n, size", [(1, 2), (2, 8), (3, 48), (5, 3840)])
def test_enumeration_size(n, size):
    elems = list(enumerate_B(n))
    assert len(elems) == size == group_order_B(n)
    assert len(set(elems)) == size


def test_enumeration_size_eight():
    assert sum(1 for _ in enumerate_B(8)) == 10321920


def test_enumeration_order():
    assert [str(w) for w in enumerate_B(2)] == [
        "[+1,+2]", "[-1,+2]", "[+1,-2]", "[-1,-2]",
        "[+2,+1]", "[-2,+1]", "[+2,-1]", "[-2,-1]",
    ]


def test_enumeration_is_lazy():
    first = list(islice(enumerate_B(8), 3))
    assert first[0] == W(tuple(range(1, 9)))
    assert first[1] == W((-1, *range(2, 9)))


def test_cap_message_names_cap_and_size():
    with pytest.raises(OracleCapError, match=r"cap 8.*185794560"):
        next(enumerate_B(9, cap=8))
    with pytest.raises(OracleCapError, match="185794560"):
        brute_counts(9)
    with pytest.raises(OracleCapError, match="cap 6"):
        verify_lemma(7)
    with pytest.raises(OracleCapError, match="cap 5"):
        verify_flip_bijection(6)


@pytest.mark.parametrize("n", [0, -3, 2.0, True])
def test_invalid_rank(n):
    with pytest.raises(ValueError):
        brute_counts(n)


# -- counts -------------------------------------------------------------------


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, (1, 0, 1, 1)),
        (2, (3, 1, 2, 3)),
        (3, (15, 6, 9, 15)),
        (4, (105, 45, 60, 105)),
    ],
)
def test_brute_count_examples(n, expected):
    c = brute_counts(n)
    assert (c.neg_B, c.neg_D, c.neg_coset, c.pos_B) == expected
    assert c.total == group_order_B(n)


@pytest.mark.parametrize("n", range(1, 7))
def test_vectorized_matches_scalar(n):
    assert brute_counts(n) == brute_counts_scalar(n)


@pytest.mark.parametrize("n", range(1, 5))
@pytest.mark.parametrize("block", [1, 5, 720])
def test_block_size_does_not_matter(n, block):
    assert brute_counts(n, block=block) == brute_counts(n)


@pytest.mark.parametrize("n", range(1, 8))
def test_counts_match_formulas(n):
    c = brute_counts(n)
    assert c.neg_B == count_all_negative_B(n)
    assert c.neg_D == count_all_negative_D(n)
    assert c.neg_coset == count_all_negative_coset(n)
    assert c.pos_B == count_all_positive_B(n)


def test_record():
    rec = brute_counts(2).as_record()
    assert rec == {"n": 2, "total": "8", "neg_B": "3", "neg_D": "1", "neg_coset": "2", "pos_B": "3"}
    assert isinstance(brute_counts(1), BruteCounts)


@pytest.mark.parametrize("n", range(1, 8))
def test_cycle_count_histogram(n):
    hist = cycle_count_histogram(n)
    assert dict(hist) == {k: (1 << n) * stirling1_unsigned(n, k) for k in range(1, n + 1)}


# -- fibers and sign vectors ----------------------------------------------------


@pytest.mark.parametrize("n", range(1, 6))
def test_orbit_sign_vector_matches_sign_product(n):
    for w in all_elements(n):
        assert orbit_sign_vector(w) == sign_vector(w)


def test_fiber_rank_one():
    part = fiber_partition(Permutation((1,)))
    assert part.k == 1
    assert part.buckets == {(1,): 1, (-1,): 1}


def test_fiber_transposition():
    part = fiber_partition(Permutation((2, 1)))
    assert part.k == 1
    assert part.buckets == {(1,): 2, (-1,): 2}


def test_fiber_identity_rank_two():
    part = fiber_partition(Permutation((1, 2)))
    assert part.buckets == {(1, 1): 1, (1, -1): 1, (-1, 1): 1, (-1, -1): 1}


@pytest.mark.parametrize("n", range(1, 7))
def test_fiber_sizes(n):
    for x in permutations(range(1, n + 1)):
        part = fiber_partition(Permutation(x))
        assert part.size == 1 << n
        assert len(part.buckets) <= 1 << part.k


@pytest.mark.parametrize("n", range(1, 7))
def test_verify_lemma(n):
    assert verify_lemma(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_verify_flip_bijection(n):
    assert verify_flip_bijection(n)


def _sign_class(x, s):
    return {w for w in fiber_partition_elements(x) if orbit_sign_vector(w) == s}


def fiber_partition_elements(x):
    return [W(tuple(e * v for e, v in zip(signs, x)))
            for signs in product((1, -1), repeat=len(x))]


def test_flip_rank_two_identity_example():
    # two fixed points, so each sign class holds 2^(2-2) = 1 element
    start = _sign_class((1, 2), (1, 1))
    target = _sign_class((1, 2), (-1, 1))
    assert start == {W((1, 2))}
    assert {flip_map(w, [1]) for w in start} == target == {W((-1, 2))}


def test_flip_rank_two_transposition_example():
    start = _sign_class((2, 1), (1,))
    target = _sign_class((2, 1), (-1,))
    assert len(start) == len(target) == 2
    assert {flip_map(w, [1]) for w in start} == target


def test_flip_empty_set_is_identity():
    for w in all_elements(3):
        assert flip_map(w, []) == w


def test_lemma_failure_reported(monkeypatch):
    monkeypatch.setattr(oracle, "orbit_sign_vector", lambda w: (1,) * len(w.window))
    failures = []
    assert not verify_lemma(2, failures=failures)
    bad = failures[0]
    assert bad.base == Permutation((1, 2))
    assert bad.count == 0 and bad.expected == 1


def test_flip_failure_reported(monkeypatch):
    monkeypatch.setattr(oracle, "flip_map", lambda w, pairs: w)
    failures = []
    assert not verify_flip_bijection(2, failures=failures)
    base, s, stray = failures[0]
    assert base == Permutation((1, 2))
    assert -1 in s
    assert stray == W((1, 2))

