from math import factorial

import pytest
from hypothesis import given, settings, strategies as st

from abslinf import trees as T
from abslinf.acceptance import _aut_brute, _to_enc, brute_force_trees
from abslinf.exactlin import InputError

c2 = T.corolla(2)


def test_small_enumerations():
    assert T.enumerate_crt(1, 0) == [T.LEAF]
    assert T.enumerate_crt(2, 0) == [c2]
    assert [T.render(t) for t in T.enumerate_crt(1, 1)] == ["(* |)"]


def test_aut_examples():
    for n in range(2, 6):
        assert T.aut_order(T.corolla(n)) == factorial(n)
    assert T.aut_order(T.LEAF) == 1
    assert T.aut_order(T.parse("(| (| |))")) == 2
    assert T.aut_order(T.parse("((| |) (| |))")) == 8


def test_renorm_examples():
    assert T.renorm_coeff(T.corolla(3)) == 6
    assert T.renorm_coeff(T.LEAF) == 1
    assert T.renorm_coeff(T.graft(c2, [c2, T.LEAF])) == 4


def test_graft():
    t = T.graft(c2, [c2, T.LEAF])
    assert [x for x in T.enumerate_crt(3, 1) if T.has_cork(x) is False] == [t]
    with pytest.raises(InputError):
        T.graft(c2, [c2])


def test_split_and_contract():
    t = T.graft(c2, [c2, T.LEAF])
    (e, lower, upper), = T.split_edges(t)
    assert lower == upper == c2
    assert T.contract_edge(t, e) == T.corolla(3)
    with pytest.raises(InputError):
        T.contract_edge(t, (5,))


def test_parse_render_roundtrip():
    for t in T.enumerate_crt(3, 3):
        assert T.parse(T.render(t)) == t
        assert T.from_json(T.to_json(t)) == t


def test_counts_match_brute_force():
    brute = brute_force_trees(3, 3)
    for ar in range(4):
        for w in range(4):
            mine = {_to_enc(t) for t in T.enumerate_crt(ar, w)}
            assert mine == brute.get((ar, w), set())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 3), st.data())
def test_tree_invariants(ar, w, data):
    ts = T.enumerate_crt(ar, w)
    if not ts:
        return
    t = data.draw(st.sampled_from(ts))
    assert T.arity(t) == ar and T.weight(t) == w
    assert T.canonical(t) == t
    assert T.aut_order(t) == _aut_brute(t)
    assert T.renorm_coeff(t) % T.aut_order(t) == 0
