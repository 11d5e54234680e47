import random
from fractions import Fraction as F

import pytest

from abslinf import transfer as TR
from abslinf import trees as T
from abslinf.clinfty import CurvedLinfty, convolution, render_vec
from abslinf.exactlin import InputError, PreconditionError
from abslinf.fixtures import (abelian_complex, curved_heisenberg_forms, heisenberg_forms,
                              random_degree_zero)
from abslinf.lie import heisenberg


def test_abelian_and_heisenberg_pass():
    assert abelian_complex({0: 2, 1: 1}, {"v1_0": {"v0_0": F(1)}}).check() == []
    assert heisenberg().check() == []


def test_symmetry_violation_is_reported():
    h = heisenberg()
    bad = CurvedLinfty(h.space, h.weights, 4, {},
                       {2: {("x", "y"): {"z": F(1)}, ("x", "x"): {"z": F(1)}}})
    fails = bad.check()
    assert fails and fails[0][1] == ("x", "x")


def test_broken_jacobi_fails():
    # [x,y] = z, [z,w] = u and nothing else: Jacobi on (x, y, w) gives u
    from abslinf.exactlin import GradedSpace
    space = GradedSpace([(a, 1) for a in "xywzu"])
    s = CurvedLinfty(space, {"x": 1, "y": 1, "w": 1, "z": 3, "u": 5}, 9, {},
                     {2: {("x", "y"): {"z": F(1)}, ("w", "z"): {"u": F(1)}}})
    fails = s.check()
    assert (3, ("x", "y", "w"), {"u": F(1)}) in fails or any(
        n == 3 and set(a) == {"x", "y", "w"} for n, a, _ in fails)


def test_l_is_graded_symmetric():
    s = heisenberg_forms(1, 3)
    a, b = "x.t1", "y.dt1"
    assert s.l(2, {a: F(1)}, {b: F(1)}) == s.l(2, {b: F(1)}, {a: F(1)})
    a, b = "x.dt1", "y.dt1"
    assert s.l(2, {a: F(1)}, {b: F(1)}) == s.l(2, {b: F(1)}, {a: F(1)})


def test_eval_series_linear():
    s = heisenberg()
    x, y = {"x": F(1)}, {"y": F(1)}
    c2 = T.corolla(2)
    assert s.eval_series([]) == {}
    total = s.eval_series([(F(1, 2), c2, [x, y]), (F(3), c2, [y, x])])
    # x, y are odd, so l_2(y, x) = -l_2(x, y)
    assert total == {"z": F(1, 2) - 3}


def test_mc_residual():
    a = abelian_complex({0: 2, -1: 1})
    assert a.mc_residual({"v0_0": F(5), "v0_1": F(-1)}) == {}
    s, alpha = curved_heisenberg_forms(3)
    assert s.mc_residual({}) == s.theta != {}
    assert s.is_mc(alpha)
    with pytest.raises(PreconditionError):
        s.twisted_differential({})


def test_twisted_differential_expands():
    s = heisenberg_forms(1, 3)
    rng = random.Random(4)
    alpha = random_degree_zero(s, rng)
    D = s.twisted_differential(alpha)
    for x in s.space.names():
        want = s.apply_d({x: F(1)})
        for k, c in s.l(2, alpha, {x: F(1)}).items():
            want[k] = want.get(k, 0) + c
        assert D({x: F(1)}) == {k: c for k, c in want.items() if c}
    assert s.twisted_differential({}) == s.differential_map()


def test_homology_of_abelian():
    a = abelian_complex({0: 2, 1: 3})
    assert [a.twisted_homology({}, k)[0] for k in (0, 1)] == [2, 3]
    cone = abelian_complex({0: 1, 1: 1}, {"v1_0": {"v0_0": F(1)}})
    assert [cone.twisted_homology({}, k)[0] for k in (0, 1)] == [0, 0]


def test_json_roundtrip():
    s = heisenberg_forms(1, 2)
    t = CurvedLinfty.from_json(s.to_json())
    assert t.to_json() == s.to_json()
    with pytest.raises(InputError):
        CurvedLinfty.from_json({"ops": {}})


def test_render():
    assert render_vec({"x": F(1), "y": F(1), "z": F(1, 2)}) == "x + y + 1/2 z"
    assert render_vec({"x": F(-2)}) == "-2 x"


def test_convolution_point_abelian():
    a = abelian_complex({0: 1, 1: 1}, {"v1_0": {"v0_0": F(1)}})
    conv = convolution(TR.UccCoalgebra(0), a)
    assert conv.ops == {} and conv.check() == []


def test_convolution_heisenberg_edge():
    conv = convolution(TR.UccCoalgebra(1), heisenberg())
    assert conv.check() == []


def test_convolution_sign_mutation_fails():
    conv = convolution(TR.UccCoalgebra(1), heisenberg())
    ops = {k: {a: dict(v) for a, v in tab.items()} for k, tab in conv.ops.items()}
    key = sorted(ops[2])[0]
    ops[2][key] = {b: -c for b, c in ops[2][key].items()}
    broken = CurvedLinfty(conv.space, conv.weights, conv.weight_cap, conv.d, ops)
    assert broken.check()
