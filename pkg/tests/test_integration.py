import random
from fractions import Fraction as F

import pytest

from abslinf import integration as IN
from abslinf.exactlin import CapabilityError, InputError, PreconditionError
from abslinf.fixtures import (abelian_complex, curved_heisenberg_forms, free_lie_forms,
                              heisenberg_forms, random_degree_one, random_degree_zero)
from abslinf.integration import TwistingMorphism
from abslinf.lie import FreeNilpotentLie, heisenberg


def test_vertex_zero_fails_when_curved():
    s, alpha = curved_heisenberg_forms(3)
    ok, I, r = IN.is_twisting(TwistingMorphism(0, s, {(0,): {}}))
    assert not ok and I == (0,) and r == s.theta
    assert IN.is_twisting(TwistingMorphism(0, s, {(0,): alpha}))[0]


def test_gauge_with_zero_lambda():
    s = heisenberg_forms(1, 3)
    alpha = random_degree_zero(s, random.Random(2))
    assert IN.gauge_flow(s, alpha, {}) == ({0: alpha} if alpha else {})
    assert IN.gauge_act(s, alpha, {}) == alpha


def test_gauge_rejects_non_mc():
    s, _ = curved_heisenberg_forms(3)
    with pytest.raises(PreconditionError):
        IN.gauge_flow(s, {}, {})


@pytest.mark.parametrize("seed", range(6))
def test_edges_are_gauges(seed):
    s = free_lie_forms(2, 1, 2)
    rng = random.Random(seed)
    alpha, lam = random_degree_zero(s, rng), random_degree_one(s, rng)
    beta = IN.gauge_act(s, alpha, lam)
    assert s.is_mc(beta)
    assert IN.is_twisting(TwistingMorphism(1, s, {(0,): alpha, (1,): beta, (0, 1): lam}))[0]
    wrong = dict(beta)
    wrong["x.dt1"] = wrong.get("x.dt1", 0) + 1
    assert not IN.is_twisting(TwistingMorphism(1, s, {(0,): alpha, (1,): wrong, (0, 1): lam}))[0]


def test_gauge_composition_is_bch():
    s = free_lie_forms(2, 1, 2)
    rng = random.Random(9)
    alpha = random_degree_zero(s, rng)
    lam, mu = random_degree_one(s, rng), random_degree_one(s, rng)
    # degree-1 part of s(L (x) A) is a Lie algebra in degree 1 here
    from abslinf.lie import lie_structure
    names = s.space.names(1)
    L1 = lie_structure(names, {n: s.weights[n] for n in names}, s.weight_cap,
                       {(a, b): s.l(2, {a: F(1)}, {b: F(1)}) for a in names for b in names})
    both = IN.bch(L1, mu, lam)
    assert IN.gauge_act(s, IN.gauge_act(s, alpha, lam), mu) == IN.gauge_act(s, alpha, both)


def test_bch_heisenberg():
    s = heisenberg()
    assert IN.bch(s, {"x": F(1)}, {"y": F(1)}) == {"x": 1, "y": 1, "z": F(1, 2)}
    with pytest.raises(CapabilityError):
        IN.bch(heisenberg_forms(1, 2), {}, {})


def test_horn_21_is_bch():
    L = FreeNilpotentLie(["x", "y"], 3)
    s = L.structure()
    phi = IN.horn_fill(s, 2, 1, {(0, 1): {"y": F(1)}, (1, 2): {"x": F(1)}})
    assert phi[(0, 2)] == L.bch({"x": F(1)}, {"y": F(1)})
    assert IN.is_twisting(phi)[0]


def test_horn_bad_input():
    s = heisenberg()
    with pytest.raises(InputError):
        IN.horn_fill(s, 1, 0, {})
    with pytest.raises(InputError):
        IN.horn_fill(s, 2, 1, {(0, 2): {"x": F(1)}})


@pytest.mark.parametrize("k", [0, 1, 2])
def test_every_horn_fills(k):
    s = heisenberg()
    data = {(0, 1): {"x": F(1)}, (0, 2): {"y": F(2)}, (1, 2): {"x": F(1), "z": F(1)}}
    missing = tuple(v for v in range(3) if v != k)
    faces = {I: v for I, v in data.items() if I != missing}
    phi = IN.horn_fill(s, 2, k, faces)
    assert IN.is_twisting(phi)[0]


def test_nerve():
    s = heisenberg()
    l1, l2 = {"x": F(1)}, {"y": F(1)}
    sim = IN.nerve_simplex(s, [l1, l2])
    assert sim[(0, 2)] == IN.bch(s, l2, l1)
    one = IN.nerve_simplex(s, [l1])
    assert one.assignment == {(0, 1): l1}


def test_pi_of_contractible():
    cone = abelian_complex({1: 1, 0: 1}, {"v1_0": {"v0_0": F(1)}})
    assert IN.homotopy_group(cone, {}, 1)[0] == 0
    with pytest.raises(InputError):
        IN.homotopy_group(cone, {}, 0)


def test_twisting_needs_table():
    s = abelian_complex({0: 1, 1: 1, 2: 1})
    with pytest.raises(CapabilityError):
        IN.is_twisting(TwistingMorphism(3, s, {}))
    # no degree-2 part: the mc^3 equations in degree 2 are vacuous
    assert IN.is_twisting(TwistingMorphism(3, heisenberg_forms(1, 2), {}))[0]
