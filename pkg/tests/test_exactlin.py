from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from abslinf.exactlin import (GradedMap, GradedSpace, InputError, NotADifferential, compose,
                              homology, kernel, koszul_sign, rank, solve)


def test_koszul_examples():
    assert koszul_sign([1, 2, 3], [1, 1, 1]) == 1
    assert koszul_sign([2, 1], [1, 1]) == -1
    assert koszul_sign([2, 3, 1], [1, 1, 0]) == -1
    assert koszul_sign([2, 1], [1, 0]) == 1


def test_koszul_length_mismatch():
    with pytest.raises(InputError):
        koszul_sign([1, 2], [1])


@given(st.lists(st.integers(0, 3), min_size=1, max_size=5), st.data())
def test_koszul_is_a_homomorphism(degs, data):
    n = len(degs)
    p = data.draw(st.permutations(range(1, n + 1)))
    q = data.draw(st.permutations(range(1, n + 1)))
    # reorder by p, then by q applied to the reordered factors
    pq = [p[q[i] - 1] for i in range(n)]
    moved = [degs[p[i] - 1] for i in range(n)]
    assert koszul_sign(pq, degs) == koszul_sign(p, degs) * koszul_sign(q, moved)


def test_compose_matches_matrix_product():
    V = GradedSpace([("a", 0), ("b", 0)])
    f = GradedMap.from_columns(V, V, 0, {"a": {"a": F(1), "b": F(3)}, "b": {"a": F(2), "b": F(4)}})
    g = GradedMap.from_columns(V, V, 0, {"a": {"a": F(5), "b": F(7)}, "b": {"a": F(6), "b": F(8)}})
    # [[1,2],[3,4]] @ [[5,6],[7,8]] = [[19,22],[43,50]]
    h = compose(f, g)
    assert h({"a": F(1)}) == {"a": 19, "b": 43}
    assert h({"b": F(1)}) == {"a": 22, "b": 50}


def test_homology_examples():
    V = GradedSpace([("u0", 0), ("u1", 0), ("w0", 1), ("w1", 1), ("w2", 1)])
    assert homology(GradedMap.zero(V, V, -1), 0)[0] == 2
    assert homology(GradedMap.zero(V, V, -1), 1)[0] == 3
    cone = GradedSpace([("p", 1), ("q", 0)])
    d = GradedMap.from_columns(cone, cone, -1, {"p": {"q": F(1)}})
    assert homology(d, 0)[0] == homology(d, 1)[0] == 0
    three = GradedSpace([("a", 2), ("b1", 1), ("b2", 1), ("c", 0)])
    d = GradedMap.from_columns(three, three, -1, {"a": {"b1": F(1)}, "b2": {"c": F(1)}})
    assert [homology(d, k)[0] for k in (0, 1, 2)] == [0, 0, 0]


def test_not_a_differential_has_witness():
    V = GradedSpace([("a", 2), ("b", 1), ("c", 0)])
    d = GradedMap.from_columns(V, V, -1, {"a": {"b": F(1)}, "b": {"c": F(1)}})
    with pytest.raises(NotADifferential) as e:
        homology(d, 1)
    assert e.value.witness == {"a": 1}


@given(st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rank_nullity(rows):
    m = [[F(x) for x in r] for r in rows]
    ker = kernel(m, 3)
    assert rank(m) + len(ker) == 3
    for v in ker:
        assert all(sum(a * b for a, b in zip(r, v)) == 0 for r in m)


def test_solve():
    x = solve([[F(2), F(1)], [F(1), F(3)]], [F(3), F(5)])
    assert x == [F(4, 5), F(7, 5)]
