import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from negcycles.signed_perm import (
    CycleDecomposition,
    Permutation,
    SignedPermutation,
    apply,
    compose,
    cycle_decomposition,
    flip_map,
    format_element,
    has_only_negative_cycles,
    has_only_positive_cycles,
    identity,
    in_D,
    inverse,
    orbits,
    parse_element,
    projection,
    sign_vector,
)

from conftest import all_elements, elements, from_point_map, point_map, ranks, windows_of_rank

W = SignedPermutation


def brute_compose(a, b):
    ma, mb = point_map(a), point_map(b)
    return from_point_map({p: ma[mb[p]] for p in mb}, a.n)


def brute_inverse(a):
    ma = point_map(a)
    return from_point_map({v: p for p, v in ma.items()}, a.n)


def orbit_structure(w):
    """Classify orbits on the 2n points directly: (negative k's, positive k's)."""
    neg, pos = [], []
    for orb in orbits(w):
        if any(-p in orb for p in orb):
            neg.append(len(orb) // 2)
        else:
            pos.append(len(orb))
    # each positive cycle shows up twice, once for each mirror
    return sorted(neg), sorted(pos)[::2]


# -- construction and text form ----------------------------------------------


def test_identity_window():
    assert identity(3).window == (1, 2, 3)


@pytest.mark.parametrize("n", [0, -1])
def test_rank_zero_rejected(n):
    with pytest.raises(ValueError, match="invalid rank"):
        identity(n)


def test_empty_window_rejected():
    with pytest.raises(ValueError):
        W(())


@pytest.mark.parametrize("window", [(1, 1), (1, 3), (0, 1), (2, -2)])
def test_bad_windows_rejected(window):
    with pytest.raises(ValueError):
        W(window)


@pytest.mark.parametrize(
    "text, window",
    [("[-1,+2]", (-1, 2)), ("[-1,2]", (-1, 2)), (" [ +3, -1 ,2 ] ", (3, -1, 2)), ("[1]", (1,))],
)
def test_parse(text, window):
    assert parse_element(text).window == window


@pytest.mark.parametrize("text", ["-1,2", "[]", "[1,,2]", "[a]", "[1,1]"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_element(text)


def test_format_round_trip():
    w = W((-1, 2, -3))
    assert format_element(w) == "[-1,+2,-3]"
    assert str(w) == "[-1,+2,-3]"
    assert parse_element(str(w)) == w


# -- group law ------------------------------------------------------------------


def test_compose_with_identity():
    w = W((3, -1, 4, -2))
    assert compose(identity(4), w) == w
    assert compose(w, identity(4)) == w


def test_transposition_is_involution():
    assert compose(W((-1,)), W((-1,))) == W((1,))


def test_compose_rank_2_example():
    a, b = W((-1, 2)), W((2, 1))
    assert brute_compose(a, b) == W((2, -1))
    assert compose(a, b) == W((2, -1))
    assert a * b == W((2, -1))


def test_compose_rank_mismatch():
    with pytest.raises(ValueError, match="rank mismatch"):
        compose(identity(2), identity(3))


def test_inverse_examples():
    assert inverse(identity(5)) == identity(5)
    assert inverse(W((-1,))) == W((-1,))
    assert brute_inverse(W((2, -1))) == W((-2, 1))
    assert inverse(W((2, -1))) == W((-2, 1))


@settings(max_examples=1000, deadline=None)
@given(ranks.flatmap(lambda n: st.tuples(*[windows_of_rank(n)] * 3)))
def test_group_laws(triple):
    a, b, c = triple
    n = a.n
    assert compose(compose(a, b), c) == compose(a, compose(b, c))
    assert compose(a, inverse(a)) == identity(n) == compose(inverse(a), a)
    assert compose(identity(n), a) == a == compose(a, identity(n))
    assert compose(a, b) == brute_compose(a, b)


@settings(max_examples=300, deadline=None)
@given(ranks.flatmap(lambda n: st.tuples(windows_of_rank(n), windows_of_rank(n))))
def test_projection_is_homomorphism(pair):
    a, b = pair
    assert projection(compose(a, b)) == projection(a).compose(projection(b))


@pytest.mark.parametrize("n", range(1, 6))
def test_mirror_symmetry_exhaustive(n):
    for w in all_elements(n):
        for p in range(1, n + 1):
            assert apply(w, -p) == -apply(w, p)
        images = sorted(apply(w, p) for p in [*range(1, n + 1), *range(-n, 0)])
        assert images == sorted([*range(1, n + 1), *range(-n, 0)])


# -- cycles ---------------------------------------------------------------------


def test_identity_cycles():
    assert cycle_decomposition(identity(2)) == CycleDecomposition((), (1, 1))


@pytest.mark.parametrize(
    "window, neg, pos",
    [
        ((-1,), (1,), ()),
        ((2, 1), (), (2,)),
        ((2, -1), (2,), ()),
        ((-1, 2), (1,), (1,)),
        ((-2, -1), (), (2,)),
    ],
)
def test_cycle_decomposition_examples(window, neg, pos):
    w = W(window)
    assert cycle_decomposition(w) == CycleDecomposition(neg, pos)
    assert orbit_structure(w) == (list(neg), list(pos))


def test_four_cycle_orbit():
    # (1, 2, 1', 2')
    assert orbits(W((2, -1))) == [(1, 2, -1, -2)]


@pytest.mark.parametrize("n", range(1, 7))
def test_cycle_decomposition_matches_orbits(n):
    for w in all_elements(n):
        dec = cycle_decomposition(w)
        assert dec.rank == n
        neg, pos = orbit_structure(w)
        assert (list(dec.negative_lengths), list(dec.positive_lengths)) == (neg, pos)
        assert dec.orbit_sizes() == sorted(len(o) for o in orbits(w))


def test_projection_examples():
    assert projection(identity(3)) == Permutation((1, 2, 3))
    assert projection(W((-1,))) == Permutation((1,))
    assert projection(W((2, -1))) == Permutation((2, 1))


def test_permutation_cycles_canonical_order():
    assert Permutation((3, 1, 2, 5, 4, 6)).cycles() == [(1, 3, 2), (4, 5), (6,)]


# -- sign vectors and the flip map ----------------------------------------------


def test_sign_vector_examples():
    assert sign_vector(identity(3)) == (1, 1, 1)
    assert sign_vector(W((-1, 2))) == (-1, 1)


def orbit_rule_signs(w):
    signs = []
    orbs = orbits(w)
    for cyc in projection(w).cycles():
        orb = next(o for o in orbs if cyc[0] in o)
        signs.append(-1 if -cyc[0] in orb else 1)
    return tuple(signs)


@pytest.mark.parametrize("n", range(1, 7))
def test_sign_product_rule_matches_orbit_rule(n):
    for w in all_elements(n):
        s = sign_vector(w)
        assert len(s) == len(projection(w).cycles())
        assert s == orbit_rule_signs(w)
        assert has_only_negative_cycles(w) == all(e == -1 for e in s)
        assert has_only_positive_cycles(w) == all(e == 1 for e in s)


def test_flip_map_examples():
    w = W((3, -1, 2))
    assert flip_map(w, []) == w
    assert flip_map(flip_map(w, {1, 3}), {1, 3}) == w
    f = flip_map(identity(2), {1})
    assert f == W((-1, 2))
    assert sign_vector(f) == (-1, 1)


def test_flip_map_is_left_multiplication():
    w = W((2, -3, 1))
    t = W((-1, 2, -3))  # (1,1')(3,3')
    assert flip_map(w, {1, 3}) == compose(t, w)


def test_flip_map_range():
    with pytest.raises(ValueError, match="out of range"):
        flip_map(identity(2), {3})


@pytest.mark.parametrize("n", range(1, 6))
def test_flip_map_fiber_exhaustive(n):
    subsets = [
        set(c) for r in range(n + 1) for c in itertools.combinations(range(1, n + 1), r)
    ]
    for w in all_elements(n):
        x = projection(w)
        s = sign_vector(w)
        cycles = x.cycles()
        for pairs in subsets:
            f = flip_map(w, pairs)
            assert projection(f) == x
            expected = tuple(
                -e if len(pairs & set(cyc)) % 2 else e for e, cyc in zip(s, cycles)
            )
            assert sign_vector(f) == expected


# -- predicates -----------------------------------------------------------------


@pytest.mark.parametrize("n", [1, 2, 5])
def test_identity_predicates(n):
    assert not has_only_negative_cycles(identity(n))
    assert has_only_positive_cycles(identity(n))
    assert in_D(identity(n))


def test_rank_one_predicates():
    w = W((-1,))
    assert has_only_negative_cycles(w)
    assert not has_only_positive_cycles(w)
    assert not in_D(w)


def test_rank_two_counts():
    group = list(all_elements(2))
    assert len(group) == 8
    assert sum(has_only_negative_cycles(w) for w in group) == 3
    assert sum(has_only_positive_cycles(w) for w in group) == 3


def test_in_D_two_negative_fixed_points():
    assert in_D(W((-1, -2)))


@pytest.mark.parametrize("n", range(1, 7))
def test_parity_bridge(n):
    for w in all_elements(n):
        neg_cycles = len(cycle_decomposition(w).negative_lengths)
        neg_entries = sum(v < 0 for v in w.window)
        assert neg_cycles % 2 == neg_entries % 2
        assert in_D(w) == (neg_cycles % 2 == 0)


@given(elements)
def test_values_are_hashable_and_immutable(w):
    assert {w: 1}[W(w.window)] == 1
    with pytest.raises(AttributeError):
        w.window = ()
