"""Transferred operations on Whitney cochains and the cobar differential of mc^n.

The curved L-infinity algebra mc^n is free on generators a_I (I a non-empty
face of Delta^n, degree |I| - 1, weight 1).  Its pre-differential on
generators is read off from the homotopy transfer of Omega_n (x) - along the
Dupont contraction:

    D(a_I) = sum_l (-1)^l a_{I - i_l} - sum_tau sum_(I_1..I_m) c * tau(a_I1, .., a_Im)

with c = sign * lambda / |Aut(tau)| for every ordered tuple, lambda the
coefficient of omega_I in mu_tau(omega_I1, .., omega_Im), and sign the Koszul
sign of separating forms from generators.  For a vertex, D(a_i) =
-sum_{m != 1} c_m(a_i, .., a_i) / m!.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement, product
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import dupont as DP
from . import trees as T
from .exactlin import CapabilityError, InputError, fmt, vadd_into
from .freealg import CORK, FreeAlgebra, gen

TRANSPOSE = "transpose"
INVERSE = "inverse"


def gname(I) -> str:
    return "a" + "".join(str(i) for i in I)


def gface(name: str) -> tuple:
    return tuple(int(c) for c in name[1:])


def eps(I) -> int:
    """Sign normalising the pairing omega_I (x) a_I (chosen so the linear part of
    D(a_I) is the alternating face sum)."""
    k = len(I) - 1
    return (-1) ** (k * (k + 3) // 2)


@lru_cache(maxsize=None)
def contraction(n: int) -> DP.Contraction:
    return DP.Contraction(n)


# --- transferred operations ---------------------------------------------------

def _planar_mu(n: int, tree, forms: List[DP.Form], root: bool = True) -> DP.Form:
    C = contraction(n)
    it = iter(forms)

    def go(t, is_root):
        if t == T.LEAF:
            return next(it)
        if t == T.CORK:
            return DP.one(n)
        out = DP.one(n)
        for c in T.children(t):
            out = DP.wedge(out, go(c, False))
            if not out:
                break
        if not is_root:
            out = C.h(out)
        return out

    return go(tree, root)


def transferred_mu(n: int, tree, inputs: Sequence[Mapping]) -> DP.Cochain:
    """mu_tau on Whitney cochains: vertices are products, inner edges h, leaves i,
    root p.  Trees with a cork other than the lone cork act by zero."""
    C = contraction(n)
    if tree == T.CORK:
        return C.p(DP.one(n))
    if T.has_cork(tree):
        return {}
    if len(inputs) != T.arity(tree):
        raise InputError("wrong number of inputs")
    forms = [C.i(w) for w in inputs]
    if tree == T.LEAF:
        return C.p(forms[0])
    return C.p(_planar_mu(n, tree, forms))


@lru_cache(maxsize=None)
def mu_on_faces(n: int, tree, faces: tuple) -> Tuple[Tuple[tuple, Fraction], ...]:
    """mu_tau(omega_J1, .., omega_Jm) as sorted (I, coef) pairs (cached)."""
    out = transferred_mu(n, tree, [{J: Fraction(1)} for J in faces])
    return tuple(sorted((I, c) for I, c in out.items() if c))


class UccCoalgebra:
    """Cellular chains of Delta^n with the decompositions dual to mu_tau."""

    def __init__(self, n: int):
        self.n = n
        self.faces = DP.faces_of(n)

    def degree(self, I) -> int:
        return len(I) - 1

    def decomposition(self, tree, I) -> List[Tuple[tuple, Fraction]]:
        return decomp_coeffs(self.n, tree, I)


def decomp_coeffs(n: int, tree, I) -> List[Tuple[tuple, Fraction]]:
    """Coefficients of a_I1 (x) .. (x) a_Im in Delta_tau(a_I), transpose reading:
    the coefficient of omega_I in mu_tau(omega_I1, .., omega_Im)."""
    I = tuple(sorted(I))
    m = T.arity(tree)
    faces = [J for J in DP.faces_of(n) if set(J) <= set(I)]
    target = len(I) - 1 + T.weight(tree)  # each inner edge h lowers form degree by one
    out = []
    if tree == T.CORK:
        c = transferred_mu(n, tree, []).get(I, 0)
        return [((), c)] if c else []
    for tup in product(faces, repeat=m):
        if sum(len(J) - 1 for J in tup) != target:
            continue
        c = dict(mu_on_faces(n, tree, tup)).get(I, 0)
        if c:
            out.append((tup, c))
    return out


# --- the free algebra mc^n ----------------------------------------------------

class McnAlgebra:
    """mc^n truncated at ``weight_cap``: the free algebra plus D on generators."""

    def __init__(self, n: int, weight_cap: int, table: Mapping[str, Mapping],
                 arities: Optional[Sequence[int]] = None, reading: str = TRANSPOSE):
        self.n = n
        self.weight_cap = weight_cap
        self.arities = tuple(arities) if arities is not None else None
        self.reading = reading
        self.faces = DP.faces_of(n)
        self.free = FreeAlgebra({gname(I): len(I) - 1 for I in self.faces}, weight_cap)
        self.free.set_d(table)

    def d(self, I) -> dict:
        return self.free.dgen.get(gname(tuple(I)), {})

    def linear_part(self, I) -> dict:
        return {k[1]: c for k, c in self.d(I).items() if k[0] == "g"}

    def to_json(self):
        rows = []
        for I in self.faces:
            terms = sorted(self.d(I).items(), key=lambda kv: (self.free.weight(kv[0]), self.free.render_key(kv[0])))
            rows.append({"generator": gname(I), "degree": len(I) - 1,
                         "d": [{"tree": self.free.render_key(k), "weight": self.free.weight(k),
                                "coef": fmt(c)} for k, c in terms]})
        return {"n": self.n, "weight_cap": self.weight_cap, "reading": self.reading,
                "arities": list(self.arities) if self.arities else None, "table": rows}


def _tree_shapes(max_leaves: int, max_weight: int, arities) -> List[tuple]:
    """Cork-free trees (not |) that can carry generator labels below the weight cap."""
    out = []
    for m in range(2, max_leaves + 1):
        for w in range(0, max_weight - m):
            for t in T.enumerate_rt(m, w):
                if arities is None or all(k in arities for k in T.vertex_arities(t)):
                    out.append(t)
    return out


def _leaf_sign(tree, form_degs: Sequence[int], gen_degs: Sequence[int]) -> int:
    """Sign produced by evaluating the planar tree on inputs omega_j (x) a_j in
    Omega (x) F, i.e. the sign s in s * mu_tau(omega..) (x) tau(a..)."""
    it = iter(zip(form_degs, gen_degs))
    sign = 1

    def go(t, is_root):
        nonlocal sign
        if t == T.LEAF:
            return next(it)
        kids = [go(c, False) for c in T.children(t)]
        us = [u for u, _ in kids]
        xs = [x for _, x in kids]
        s = sum(xs[r] * us[q] for r in range(len(kids)) for q in range(r + 1, len(kids)))
        s += sum(us)
        if s % 2:
            sign = -sign
        u = sum(us) + (0 if is_root else 1)
        return u, sum(xs) - 1

    go(tree, True)
    return sign


def _top_cell_table(k: int, weight_cap: int, arities=None, reading=TRANSPOSE) -> dict:
    """D(a_[k]) as a dict of free-algebra keys, generators named on [k]."""
    I = tuple(range(k + 1))
    free = FreeAlgebra({gname(J): len(J) - 1 for J in DP.faces_of(k)}, weight_cap)
    out: dict = {}
    if k == 0:
        out[CORK] = Fraction(-1)
        for m in range(2, weight_cap):
            if arities is not None and m not in arities:
                continue
            sign, key = free.make([gen("a0")] * m)
            if sign and free.weight(key) < weight_cap:
                vadd_into(out, {key: Fraction(-sign, factorial(m))})
        return free.truncate(out)
    for l in range(k + 1):
        J = I[:l] + I[l + 1:]
        vadd_into(out, {gen(gname(J)): Fraction((-1) ** l)})
    omega_deg = -k
    for tree in _tree_shapes(weight_cap - 1, weight_cap, arities):
        m = T.arity(tree)
        aut = T.aut_order(tree)
        E = T.renorm_coeff(tree)
        for tup, lam in decomp_coeffs(k, tree, I):
            labels = [gen(gname(J)) for J in tup]
            key = free_graft(free, tree, labels)
            if key is None:
                continue
            sgn, kk = key
            if free.weight(kk) >= weight_cap:
                continue
            s = _leaf_sign(tree, [-(len(J) - 1) for J in tup], [len(J) - 1 for J in tup])
            e = eps(I) * (-1) ** (omega_deg % 2)
            for J in tup:
                e *= eps(J)
            if reading == TRANSPOSE:
                c = Fraction(lam, aut)
            else:
                c = Fraction(1, E) / lam
            vadd_into(out, {kk: -e * s * sgn * c})
    return free.truncate(out)


def free_graft(free: FreeAlgebra, tree, labels):
    """(sign, key) of the planar tree with generator labels, or None if it vanishes."""
    it = iter(labels)
    sign = 1

    def go(t):
        nonlocal sign
        if t == T.LEAF:
            return next(it)
        if t == T.CORK:
            return CORK
        kids = [go(c) for c in T.children(t)]
        if any(x is None for x in kids):
            return None
        s, key = free.make(kids)
        if not s:
            return None
        sign *= s
        return key

    key = go(tree)
    return None if key is None else (sign, key)


def relabel(v: Mapping, I: Sequence[int]) -> dict:
    """Rename generators of the top cell of Delta^k onto the face I of Delta^n."""
    def go(key):
        if key[0] == "g":
            return gen(gname(tuple(I[j] for j in gface(key[1]))))
        if key == CORK:
            return key
        return ("v", tuple(go(c) for c in key[1]))

    # relabeling is order preserving on faces, so sorted children stay sorted
    # up to the comparison of names; re-canonicalize to be safe.
    out = {}
    for k, c in v.items():
        out[_canon(go(k))] = out.get(_canon(go(k)), 0) + c * _canon_sign(go(k))
    return {k: c for k, c in out.items() if c}


def _canon(key):
    return _canon_full(key)[1]


def _canon_sign(key):
    return _canon_full(key)[0]


def _canon_full(key):
    if key[0] == "g" or key == CORK:
        return 1, key
    parts = [_canon_full(c) for c in key[1]]
    sign = 1
    for s, _ in parts:
        sign *= s
    kids = [k for _, k in parts]
    degs = [_key_degree(k) for k in kids]
    order = sorted(range(len(kids)), key=lambda i: kids[i])
    from .exactlin import koszul_sign
    sign *= koszul_sign([i + 1 for i in order], degs)
    return sign, ("v", tuple(kids[i] for i in order))


def _key_degree(key):
    if key[0] == "g":
        return len(key[1]) - 2
    if key == CORK:
        return -1
    return -1 + sum(_key_degree(c) for c in key[1])


_TABLES: Dict[tuple, dict] = {}


def top_cell(k: int, weight_cap: int, arities=None, reading=TRANSPOSE) -> dict:
    key = (k, weight_cap, tuple(sorted(arities)) if arities is not None else None, reading)
    if key not in _TABLES:
        _TABLES[key] = _top_cell_table(k, weight_cap, arities, reading)
    return _TABLES[key]


def build_mcn(n: int, weight_cap: int, arities=None, reading: str = TRANSPOSE,
              max_n: int = 2) -> McnAlgebra:
    if n < 0:
        raise InputError("n must be >= 0")
    if n > max_n:
        raise CapabilityError(f"mc^{n} requested but the supported bound is n <= {max_n}")
    if reading not in (TRANSPOSE, INVERSE):
        raise InputError(f"unknown dual reading {reading!r}")
    table = {}
    for I in DP.faces_of(n):
        table[gname(I)] = relabel(top_cell(len(I) - 1, weight_cap, arities, reading), I)
    return McnAlgebra(n, weight_cap, table, arities, reading)


def check_mcn_curvature(M: McnAlgebra) -> List[Tuple[str, dict]]:
    """Generators where D^2 a + l_2(*, a) does not vanish below the cap."""
    bad = []
    for I in M.faces:
        r = M.free.curvature_defect({gen(gname(I)): Fraction(1)})
        if r:
            bad.append((gname(I), r))
    return bad


# --- independent route: fixed point in Omega_n (x) F ---------------------------------

def _tensor_l(free: FreeAlgebra, n: int, terms):
    """l_k on pure tensors [(form_key, tree_key, coef)] -> dict {(fk, tk): c}."""
    form = DP.one(n)
    us, xs = [], []
    for fk, tk, _ in terms:
        us.append(-len(fk[1]))
        xs.append(free.degree(tk))
    s = sum(xs[r] * us[q] for r in range(len(terms)) for q in range(r + 1, len(terms))) + sum(us)
    coef = (-1) ** (s % 2)
    for fk, tk, c in terms:
        form = DP.wedge(form, {fk: Fraction(1)})
        coef *= c
        if not form:
            return {}
    sg, key = free.make([tk for _, tk, _ in terms])
    if not sg:
        return {}
    return {(fk, key): coef * sg * c for fk, c in form.items()}


def fixed_point_table(n: int, weight_cap: int, arities=None) -> dict:
    """D on all generators of mc^n computed from the MC fixed point (oracle)."""
    C = contraction(n)
    free = FreeAlgebra({gname(J): len(J) - 1 for J in DP.faces_of(n)}, weight_cap)
    base: dict = {}
    for J in DP.faces_of(n):
        for fk, c in C.i({J: 1}).items():
            vadd_into(base, {(fk, gen(gname(J))): eps(J) * c})

    def xi(phi):
        out: dict = {}
        vadd_into(out, {(fk, CORK): c for fk, c in DP.one(n).items()})
        items = [(fk, tk, c) for (fk, tk), c in phi.items()]
        for m in range(2, weight_cap):
            if arities is not None and m not in arities:
                continue
            for combo in combinations_with_replacement(range(len(items)), m):
                if sum(free.weight(items[i][1]) for i in combo) + 1 >= weight_cap:
                    continue
                mult = {}
                for i in combo:
                    mult[i] = mult.get(i, 0) + 1
                denom = 1
                for v in mult.values():
                    denom *= factorial(v)
                val = _tensor_l(free, n, [items[i] for i in combo])
                vadd_into(out, val, Fraction(1, denom))
        return {k: c for k, c in out.items() if free.weight(k[1]) < weight_cap}

    phi = dict(base)
    for _ in range(weight_cap + 1):
        x = xi(phi)
        hx: dict = {}
        by_tree: Dict[tuple, dict] = {}
        for (fk, tk), c in x.items():
            by_tree.setdefault(tk, {})[fk] = c
        for tk, f in by_tree.items():
            for fk, c in C.h(f).items():
                vadd_into(hx, {(fk, tk): c})
        new = dict(base)
        vadd_into(new, hx)
        if new == phi:
            break
        phi = new
    x = xi(phi)
    rhs: Dict[tuple, dict] = {}
    for J in DP.faces_of(n):
        for I, c in DP.cochain_d(n, {J: 1}).items():
            vadd_into(rhs.setdefault(I, {}), {gen(gname(J)): -eps(J) * c})
    by_tree = {}
    for (fk, tk), c in x.items():
        by_tree.setdefault(tk, {})[fk] = c
    for tk, f in by_tree.items():
        for I, c in C.p(f).items():
            vadd_into(rhs.setdefault(I, {}), {tk: -c})
    table = {}
    for I in DP.faces_of(n):
        sign = eps(I) * (-1) ** (len(I) - 1)
        table[gname(I)] = {k: sign * c for k, c in rhs.get(I, {}).items() if free.weight(k) < weight_cap}
    return table
