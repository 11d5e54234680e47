from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from abslinf.exactlin import PreconditionError
from abslinf.lie import FreeNilpotentLie, bch_oracle, hall_basis, length


def witt(n, q):
    # necklace count: (1/n) sum_{d | n} mu(d) q^(n/d)
    def mu(d):
        out, p, m = 1, 2, d
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        return -out if m > 1 else out
    return sum(mu(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


@pytest.mark.parametrize("gens", [["x", "y"], ["x", "y", "w"]])
def test_hall_dimensions(gens):
    H = hall_basis(gens, 4)
    for n in range(1, 5):
        assert sum(1 for h in H if length(h) == n) == witt(n, len(gens))


def test_bch_low_order():
    x, y = {("x",): F(1)}, {("y",): F(1)}
    b = bch_oracle(x, y, 2)
    assert b == {("x",): 1, ("y",): 1, ("x", "y"): F(1, 2), ("y", "x"): F(-1, 2)}


def test_structures_are_lie():
    for c in (2, 3, 4):
        assert FreeNilpotentLie(["x", "y"], c).structure().check() == []


def test_from_poly_rejects_non_lie():
    L = FreeNilpotentLie(["x", "y"], 2)
    with pytest.raises(PreconditionError):
        L.from_poly({("x", "y"): F(1)})


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=5, max_size=5),
       st.lists(st.integers(-2, 2), min_size=5, max_size=5))
def test_bch_is_lie_and_inverse(a, b):
    L = FreeNilpotentLie(["x", "y"], 3)
    names = [L.name[h] for h in L.hall]
    x = {n: F(c) for n, c in zip(names, a) if c}
    y = {n: F(c) for n, c in zip(names, b) if c}
    z = L.bch(x, y)
    assert L.bch(z, {n: -c for n, c in y.items()}) == x
