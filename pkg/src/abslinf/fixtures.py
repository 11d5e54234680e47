"""Test and demo structures.

The main family is s(L (x) A): a nilpotent Lie algebra L tensored with a
truncation A of the polynomial forms on a simplex, shifted so that
Maurer-Cartan elements sit in degree 0.  A keeps the monomials
t^a dt^S with |a| + |S| < K; the discarded monomials span a d-stable ideal,
so A is again a commutative dg algebra.  The shift uses

    d(sx) = -s(dx),    l_2(sx, sy) = (-1)^|x| s[x, y].
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, List, Mapping, Optional, Tuple

from . import dupont as DP
from .clinfty import CurvedLinfty
from .exactlin import GradedSpace, rref, vadd_into
from .lie import FreeNilpotentLie, heisenberg


# --- truncated forms --------------------------------------------------------------

def form_monomials(n: int, K: int) -> List[tuple]:
    out = []
    for k in range(0, n + 1):
        for S in combinations(range(1, n + 1), k):
            for exps in product(range(K), repeat=n):
                if sum(exps) + k < K:
                    out.append((exps, S))
    return out


def mono_name(key) -> str:
    exps, S = key
    parts = []
    for i, a in enumerate(exps, start=1):
        if a:
            parts.append(f"t{i}" + (f"^{a}" if a > 1 else ""))
    if S:
        parts.append("^".join(f"dt{i}" for i in S))
    return " ".join(parts) if parts else "1"


class TruncatedForms:
    def __init__(self, n: int, K: int):
        self.n, self.K = n, K
        self.basis = form_monomials(n, K)
        self.keep = set(self.basis)

    def _cut(self, u):
        return {k: c for k, c in u.items() if k in self.keep and c}

    def mul(self, a, b):
        return self._cut(DP.wedge({a: Fraction(1)}, {b: Fraction(1)}))

    def d(self, a):
        return self._cut(DP.dform({a: Fraction(1)}))


# --- s(L (x) A) ---------------------------------------------------------------------

def lie_tensor_forms(L: CurvedLinfty, n: int, K: int, curvature: Optional[Mapping] = None,
                     name: str = "") -> CurvedLinfty:
    """s(L (x) A) for a degree-1 Lie structure L (read as an ordinary Lie algebra).

    ``curvature`` is an optional element {(lie name, form key): coef} of
    degree -1; it must be central and closed for the result to be curved
    L-infinity, which check() verifies.
    """
    A = TruncatedForms(n, K)
    lie = L.space.names()
    nm = {(e, f): f"{e}.{mono_name(f)}" for e in lie for f in A.basis}
    space = GradedSpace([(nm[e, f], 1 - len(f[1])) for e in lie for f in A.basis])
    weights = {nm[e, f]: L.weights[e] for e in lie for f in A.basis}
    d = {}
    for e in lie:
        for f in A.basis:
            v = {nm[e, g]: -c for g, c in A.d(f).items()}
            if v:
                d[nm[e, f]] = v
    ops2 = {}
    elems = [(e, f) for e in lie for f in A.basis]
    for (e1, f1), (e2, f2) in combinations(elems, 2):
        _add_bracket(L, A, nm, ops2, e1, f1, e2, f2)
    for (e, f) in elems:
        _add_bracket(L, A, nm, ops2, e, f, e, f)
    ops = {2: ops2}
    if curvature:
        ops[0] = {(): {nm[e, f]: Fraction(c) for (e, f), c in curvature.items()}}
    return CurvedLinfty(space, weights, L.weight_cap, d, ops,
                        name=name or f"{L.name} (x) Omega_{n}/{K}")


def _add_bracket(L, A, nm, ops2, e1, f1, e2, f2):
    br = L.l(2, {e1: Fraction(1)}, {e2: Fraction(1)})
    if not br:
        return
    prod = A.mul(f1, f2)
    if not prod:
        return
    # unshifted degree of x = e1 (x) f1 is -|S1|
    sign = (-1) ** len(f1[1])
    v = {}
    for e, c in br.items():
        for f, cf in prod.items():
            vadd_into(v, {nm[e, f]: sign * c * cf})
    a, b = nm[e1, f1], nm[e2, f2]
    if (a, b) in ops2 or not v:
        return
    ops2[(a, b)] = v


def form_key(n: int, exps=None, S=()) -> tuple:
    return (tuple(exps or (0,) * n), tuple(S))


def elem(e: str, n: int, exps=None, S=(), c=1) -> Dict[str, Fraction]:
    return {f"{e}.{mono_name(form_key(n, exps, S))}": Fraction(c)}


# --- named fixtures -----------------------------------------------------------------

def abelian_complex(dims: Mapping[int, int], d: Mapping[str, Mapping] = None,
                    cap: int = 4, name: str = "abelian") -> CurvedLinfty:
    """Chain complex with basis v<deg>_<i>, all operations zero, weight 1."""
    basis = [(f"v{k}_{i}", k) for k, m in sorted(dims.items()) for i in range(m)]
    space = GradedSpace(basis)
    return CurvedLinfty(space, {b: 1 for b, _ in basis}, cap, d or {}, {}, name=name)


def random_abelian(rng: random.Random, cap: int = 4) -> CurvedLinfty:
    """Random complex in degrees -1..2: a sum of lines and two-term pieces
    a -> b, written in a randomly changed (unitriangular) basis per degree."""
    pieces: Dict[int, List[str]] = {k: [] for k in range(-1, 3)}
    dpiece: Dict[str, str] = {}
    cnt = 0
    for _ in range(rng.randint(1, 5)):
        k = rng.randint(-1, 2)
        if k > -1 and rng.random() < 0.5:
            a, b = f"p{cnt}", f"p{cnt + 1}"
            cnt += 2
            pieces[k].append(a)
            pieces[k - 1].append(b)
            dpiece[a] = b
        else:
            pieces[k].append(f"p{cnt}")
            cnt += 1
    # new basis v_k_i = sum_{j >= i} u_ij p_j with u unitriangular
    change: Dict[str, Dict[str, Fraction]] = {}   # old piece -> new-basis vector
    names: Dict[int, List[str]] = {}
    for k, ps in pieces.items():
        names[k] = [f"v{k}_{i}" for i in range(len(ps))]
        m = len(ps)
        u = [[Fraction(int(i == j)) if j <= i else Fraction(rng.randint(-1, 1)) for j in range(m)]
             for i in range(m)]
        # p_j = sum_i inv[j][i] v_i
        aug = [u[i] + [Fraction(int(i == j)) for j in range(m)] for i in range(m)]
        red, _ = rref(aug) if m else ([], [])
        inv = [r[m:] for r in red]
        for j, pj in enumerate(ps):
            change[pj] = {names[k][i]: c for i, c in enumerate(inv[j]) if c}
        for i, v in enumerate(names[k]):
            change[v] = {ps[j]: u[i][j] for j in range(m) if u[i][j]}
    d: Dict[str, dict] = {}
    for k, vs in names.items():
        for v in vs:
            out: Dict[str, Fraction] = {}
            for pj, c in change[v].items():
                if pj in dpiece:
                    vadd_into(out, change[dpiece[pj]], c)
            if out:
                d[v] = out
    dims = {k: len(v) for k, v in names.items()}
    return abelian_complex(dims, d, cap, name="random abelian")


def heisenberg_forms(n: int = 1, K: int = 3) -> CurvedLinfty:
    return lie_tensor_forms(heisenberg(), n, K)


def curved_heisenberg_forms(K: int = 3) -> Tuple[CurvedLinfty, Dict[str, Fraction]]:
    """Heisenberg (x) Omega_2 with theta = s(z (x) dt1 dt2), and an MC element."""
    theta = {("z", form_key(2, S=(1, 2))): 1}
    s = lie_tensor_forms(heisenberg(), 2, K, curvature=theta, name="curved heisenberg")
    alpha = elem("z", 2, exps=(1, 0), S=(2,))
    return s, alpha


def free_lie_forms(c: int, n: int = 1, K: int = 2) -> CurvedLinfty:
    return lie_tensor_forms(FreeNilpotentLie(["x", "y"], c).structure(), n, K)


def random_degree_zero(s: CurvedLinfty, rng: random.Random, density: float = 0.5,
                       coefs=(-2, -1, 1, 2, Fraction(1, 2))) -> Dict[str, Fraction]:
    out = {}
    for a in s.space.names(0):
        if rng.random() < density:
            out[a] = Fraction(rng.choice(coefs))
    return s.truncate(out)


def random_degree_one(s: CurvedLinfty, rng: random.Random, density: float = 0.5,
                      coefs=(-1, 1, 2, Fraction(1, 3))) -> Dict[str, Fraction]:
    out = {}
    for a in s.space.names(1):
        if rng.random() < density:
            out[a] = Fraction(rng.choice(coefs))
    return s.truncate(out)


def _curved():
    return curved_heisenberg_forms(3)[0]


FIXTURES = {
    "heisenberg": heisenberg,
    "heisenberg-forms": lambda: heisenberg_forms(1, 3),
    "heisenberg-forms-2": lambda: heisenberg_forms(2, 3),
    "curved-heisenberg": _curved,
    "free-lie-2": lambda: FreeNilpotentLie(["x", "y"], 2).structure(),
    "free-lie-3": lambda: FreeNilpotentLie(["x", "y"], 3).structure(),
    "free-lie-4": lambda: FreeNilpotentLie(["x", "y"], 4).structure(),
    "free-lie-3-gens-3": lambda: FreeNilpotentLie(["x", "y", "w"], 3).structure(),
}


def fixture(name: str) -> CurvedLinfty:
    from .exactlin import InputError
    if name not in FIXTURES:
        raise InputError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}")
    return FIXTURES[name]()
