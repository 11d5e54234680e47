from fractions import Fraction as F
from math import factorial

import pytest

from abslinf import transfer as TR
from abslinf import trees as T
from abslinf.exactlin import CapabilityError
from abslinf.freealg import CORK, gen
from abslinf.transfer import McnAlgebra, build_mcn, check_mcn_curvature, fixed_point_table


def test_cork_trees_act_trivially():
    assert TR.transferred_mu(1, T.parse("(* |)"), [{(0,): F(1)}]) == {}
    # the lone cork is p(1), the sum of the vertices
    assert TR.transferred_mu(1, T.CORK, []) == {(0,): 1, (1,): 1}


def test_binary_product_on_the_edge():
    # mu_{c2}(w0, w01) = p(t0 dt1) = 1/2 w01
    assert TR.transferred_mu(1, T.corolla(2), [{(0,): F(1)}, {(0, 1): F(1)}]) == {(0, 1): F(1, 2)}
    assert set(TR.decomp_coeffs(1, T.corolla(2), (0, 1))) == {
        (((0,), (0, 1)), F(1, 2)), (((1,), (0, 1)), F(1, 2)),
        (((0, 1), (0,)), F(1, 2)), (((0, 1), (1,)), F(1, 2))}


@pytest.mark.parametrize("n", [0, 1, 2])
def test_curvature(n):
    assert check_mcn_curvature(build_mcn(n, 4)) == []


def test_curvature_higher_cap():
    assert check_mcn_curvature(build_mcn(1, 6)) == []
    assert check_mcn_curvature(build_mcn(2, 5)) == []


def test_mcn3_needs_config():
    with pytest.raises(CapabilityError):
        build_mcn(3, 4)


def test_linear_part_is_the_cellular_boundary():
    M = build_mcn(2, 4)
    for I in M.faces:
        if len(I) > 1:
            want = {TR.gname(I[:l] + I[l + 1:]): F((-1) ** l) for l in range(len(I))}
            assert M.linear_part(I) == want


def test_vertex_formula():
    cap = 6
    M = build_mcn(1, cap)
    d = M.d((0,))
    a = gen("a0")
    want = {CORK: F(-1)}
    for m in range(2, cap - 1):
        want[("v", (a,) * m)] = F(-1, factorial(m))
    assert d == want


def test_mutation_is_detected():
    M = build_mcn(1, 4)
    table = {g: dict(v) for g, v in M.free.dgen.items()}
    key = next(k for k in table["a01"] if k[0] == "v")
    table["a01"][key] *= 2
    assert check_mcn_curvature(McnAlgebra(1, 4, table)) != []


def test_inverse_reading_fails():
    bad = build_mcn(1, 6, reading=TR.INVERSE)
    assert check_mcn_curvature(bad) != []


def test_fixed_point_oracle_matches():
    M = build_mcn(1, 5)
    assert fixed_point_table(1, 5) == M.free.dgen


def test_dump_is_deterministic():
    assert build_mcn(1, 4).to_json() == build_mcn(1, 4).to_json()
