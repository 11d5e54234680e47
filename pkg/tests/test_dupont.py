from fractions import Fraction as F

import pytest

from abslinf import dupont as DP
from abslinf.exactlin import InputError


def test_whitney_forms():
    assert DP.whitney(1, (0, 1)) == DP.dt(1, 1)
    assert DP.whitney(1, (1,)) == DP.t(1, 1)
    assert DP.whitney(2, (0, 1, 2)) == {((0, 0), (1, 2)): 2}
    with pytest.raises(InputError):
        DP.whitney(1, ())


def test_integrate_whitney_top_form():
    for n in range(1, 4):
        assert DP.integrate(n, DP.whitney(n, tuple(range(n + 1)))) == 1


def test_p_of_t1_dt1():
    u = DP.wedge(DP.t(1, 1), DP.dt(1, 1))
    assert DP.Contraction(1).p(u) == {(0, 1): F(1, 2)}


def test_face_on_vertices():
    assert DP.face(1, 0, DP.t(1, 1)) == DP.one(0)
    assert DP.face(1, 1, DP.t(1, 1)) == {}


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_dupont_identities(n):
    res = DP.check_identities(n, 5 if n < 3 else 4)
    assert set(res) == set(DP.IDENTITIES)
    assert all(not f for f in res.values()), res


@pytest.mark.parametrize("n", [1, 2])
def test_simplicial(n):
    assert DP.check_simplicial(n, 4) == []


def test_leibniz_on_functions_and_dd():
    u = DP.parse_form(2, "t1^2 t2 + 3 t2 dt1")
    v = DP.parse_form(2, "t1 dt2 - 1/2 t2")
    u0 = DP.parse_form(2, "t1^2 t2")
    lhs = DP.dform(DP.wedge(u0, v))
    rhs = {}
    for part in (DP.wedge(DP.dform(u0), v), DP.wedge(u0, DP.dform(v))):
        for k, c in part.items():
            rhs[k] = rhs.get(k, 0) + c
    assert lhs == {k: c for k, c in rhs.items() if c}
    assert DP.dform(DP.dform(u)) == {}


def test_form_text_roundtrip():
    u = DP.parse_form(2, "1 - dt2 + t2 dt2 + 3/2 t1^2 t2 dt1^dt2")
    assert DP.parse_form(2, DP.render_form(u)) == u
    assert DP.parse_form(1, "t0") == DP.parse_form(1, "1 - t1")
