import itertools

import pytest
from hypothesis import strategies as st

from negcycles.signed_perm import SignedPermutation


def windows_of_rank(n):
    return st.tuples(
        st.permutations(range(1, n + 1)),
        st.lists(st.booleans(), min_size=n, max_size=n),
    ).map(lambda ps: SignedPermutation(tuple(-v if neg else v for v, neg in zip(*ps))))


ranks = st.integers(min_value=1, max_value=20)
elements = ranks.flatmap(windows_of_rank)


def all_elements(n):
    for perm in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            yield SignedPermutation(tuple(s * v for s, v in zip(signs, perm)))


def point_map(w):
    """The action of ``w`` on 1..n and the mirrors -1..-n as a plain dict."""
    out = {}
    for i, v in enumerate(w.window, 1):
        out[i] = v
        out[-i] = -v
    return out


def from_point_map(m, n):
    return SignedPermutation(tuple(m[i] for i in range(1, n + 1)))


@pytest.fixture
def all_B():
    return all_elements
