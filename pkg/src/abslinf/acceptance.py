"""The acceptance suite: ten exact checks, each returning (ok, detail).

Oracles that must not share code with the implementation under test (tree
enumeration, automorphism counts, BCH) are written here from scratch.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Callable, Dict, List, Tuple

from . import dupont as DP
from . import transfer as TR
from . import trees as T
from .clinfty import convolution
from .exactlin import homology, vadd_into
from .fixtures import (curved_heisenberg_forms, free_lie_forms, heisenberg_forms,
                       random_abelian, random_degree_one, random_degree_zero)
from .freealg import CORK, gen
from .integration import (TwistingMorphism, bch, gauge_act, gauge_flow, homotopy_group,
                          is_twisting, nerve_face, nerve_simplex, ode_residual, poly_at)
from .lie import FreeNilpotentLie, heisenberg

Result = Tuple[bool, str]


# --- 1 -------------------------------------------------------------------------------

def dupont_identities(max_n: int = 3, max_deg: int = 6) -> Result:
    bad = []
    for n in range(max_n + 1):
        for name, fails in DP.check_identities(n, max_deg).items():
            if fails:
                bad.append(f"n={n} {name}: {fails[0]}")
        # degeneracies out of Delta^3 land in Delta^4, checked on degree <= 2
        deg_bound = max_deg if n < 3 else 2
        fails = DP.check_simplicial(n, max_deg, deg_bound)
        if fails:
            bad.append(f"n={n} simplicial: {fails[0]}")
    return not bad, "; ".join(bad) or f"5 identities and simplicial maps, n <= {max_n}, degree <= {max_deg}"


# --- 2 -------------------------------------------------------------------------------

def _enc(t) -> str:
    if t == "L":
        return "L"
    if t == "C":
        return "C"
    return "(" + ",".join(sorted(_enc(c) for c in t)) + ")"


def brute_force_trees(max_ar: int, max_w: int) -> Dict[Tuple[int, int], set]:
    """Grow trees from a bare leaf by replacing a leaf with a k-corolla or a cork."""
    def leaves(t, path=()):
        if t == "L":
            return [path]
        if t == "C":
            return []
        return [p for i, c in enumerate(t) for p in leaves(c, path + (i,))]

    def put(t, path, new):
        if not path:
            return new
        kids = list(t)
        kids[path[0]] = put(kids[path[0]], path[1:], new)
        return tuple(kids)

    def nv(t):
        return 0 if t == "L" else 1 if t == "C" else 1 + sum(nv(c) for c in t)

    seen = {_enc("L"): "L"}
    frontier = ["L"]
    max_v = max_w + 1
    while frontier:
        nxt = []
        for t in frontier:
            if nv(t) >= max_v:
                continue
            for p in leaves(t):
                for new in ["C"] + [tuple(["L"] * k) for k in range(2, max_ar + max_v + 1)]:
                    s = put(t, p, new)
                    if len(leaves(s)) > max_ar + (max_v - nv(s)):
                        continue
                    e = _enc(s)
                    if e not in seen:
                        seen[e] = s
                        nxt.append(s)
        frontier = nxt
    out: Dict[Tuple[int, int], set] = {}
    for e, t in seen.items():
        ar, w = len(leaves(t)), max(nv(t) - 1, 0)
        if ar <= max_ar and w <= max_w:
            out.setdefault((ar, w), set()).add(e)
    return out


def _to_enc(t) -> str:
    if t == T.LEAF:
        return "L"
    if t == T.CORK:
        return "C"
    return "(" + ",".join(sorted(_to_enc(c) for c in T.children(t))) + ")"


def _aut_brute(t) -> int:
    kids = T.children(t)
    total = 0
    for perm in permutations(range(len(kids))):
        if all(kids[i] == kids[perm[i]] for i in range(len(kids))):
            prod = 1
            for c in kids:
                prod *= _aut_brute(c)
            total += prod
    return total if kids else 1


def tree_layer(max_ar: int = 4, max_w: int = 4) -> Result:
    brute = brute_force_trees(max_ar, max_w)
    bad = []
    for ar in range(max_ar + 1):
        for w in range(max_w + 1):
            mine = [_to_enc(t) for t in T.enumerate_crt(ar, w)]
            if len(mine) != len(set(mine)) or set(mine) != brute.get((ar, w), set()):
                bad.append(f"CRT({ar},{w}): {len(mine)} vs {len(brute.get((ar, w), ()))}")
            for t in T.enumerate_crt(ar, w):
                kids = T.children(t)
                rec = factorial(len(kids))
                for c in kids:
                    rec *= T.renorm_coeff(c)
                if t != T.LEAF and T.renorm_coeff(t) != rec:
                    bad.append(f"E recursion at {T.render(t)}")
                if T.aut_order(t) != _aut_brute(t):
                    bad.append(f"Aut at {T.render(t)}")
    for n in range(2, 7):
        if T.renorm_coeff(T.corolla(n)) != factorial(n):
            bad.append(f"E(c_{n})")
    return not bad, "; ".join(bad[:5]) or f"counts match brute force for arity <= {max_ar}, weight <= {max_w}"


# --- 3, 4 -----------------------------------------------------------------------------

def face_sum(I) -> dict:
    return {gen(TR.gname(I[:l] + I[l + 1:])): Fraction((-1) ** l) for l in range(len(I))}


def mcn_curvature(cap: int = 4) -> Result:
    bad = []
    for n in range(3):
        M = TR.build_mcn(n, cap)
        for g, r in TR.check_mcn_curvature(M):
            bad.append(f"n={n} {g}: defect with {len(r)} terms")
        for I in M.faces:
            if len(I) >= 2:
                lin = {k: c for k, c in M.d(I).items() if k[0] == "g"}
                if lin != face_sum(I):
                    bad.append(f"n={n} linear part of d(a_{I})")
    return not bad, "; ".join(bad) or f"D^2 + l_2(cork, -) = 0 on all generators, n <= 2, cap {cap}"


def cork_vanishing(cap: int = 6) -> Result:
    bad = []
    M = TR.build_mcn(2, cap)
    for I in M.faces:
        d = M.d(I)
        if len(I) >= 2:
            for key in d:
                if _has_cork(key):
                    bad.append(f"cork in d(a_{I})")
        else:
            a = gen(TR.gname(I))
            want = {CORK: Fraction(-1)}
            for m in range(2, cap):
                key = ("v", (a,) * m)
                if M.free.weight(key) < cap:
                    want[key] = Fraction(-1, factorial(m))
            if d != want:
                bad.append(f"d(a_{I}) differs from the vertex formula")
    return not bad, "; ".join(bad) or f"checked mc^2 at cap {cap}"


def _has_cork(key) -> bool:
    return key == CORK or (key[0] == "v" and any(_has_cork(c) for c in key[1]))


# --- 5 ------------------------------------------------------------------------------------

def bch_recovery(classes=(2, 3, 4), seed: int = 0) -> Result:
    bad = []
    rng = random.Random(seed)
    for c in classes:
        L = FreeNilpotentLie(["x", "y"], c)
        s = L.structure()
        pairs = [({"x": Fraction(1)}, {"y": Fraction(1)})]
        names = [L.name[h] for h in L.hall]
        for _ in range(2):
            pairs.append(tuple({n: Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for n in names
                                if rng.random() < 0.6} for _ in range(2)))
        for x, y in pairs:
            if bch(s, x, y) != L.bch(x, y):
                bad.append(f"class {c}: {x}, {y}")
    return not bad, "; ".join(bad) or f"Hall coefficients agree for classes {list(classes)}"


# --- 6 -------------------------------------------------------------------------------------

def gauge_fixtures(count: int = 25, seed: int = 1):
    """(structure, MC element, lambda) triples with weight cap <= 4."""
    rng = random.Random(seed)
    makers = [lambda: heisenberg_forms(1, 3), lambda: heisenberg_forms(1, 2),
              lambda: heisenberg_forms(2, 3), lambda: curved_heisenberg_forms(3)[0]]
    cache = {}
    out = []
    for i in range(count):
        k = i % len(makers)
        if k not in cache:
            cache[k] = makers[k]()
        s = cache[k]
        if k == 3:
            alpha = dict(curved_heisenberg_forms(3)[1])
        elif k == 2:
            # constant one-forms in a single Lie direction commute
            e = rng.choice(["x", "y", "z"])
            alpha = {f"{e}.dt1": Fraction(rng.randint(-2, 2)), f"{e}.dt2": Fraction(rng.randint(-2, 2))}
            alpha = {a: c for a, c in alpha.items() if c}
        else:
            alpha = random_degree_zero(s, rng)
        lam = random_degree_one(s, rng)
        out.append((s, alpha, lam))
    return out


def gauge_flow_check() -> Result:
    bad = []
    for i, (s, alpha, lam) in enumerate(gauge_fixtures()):
        if s.weight_cap > 4:
            bad.append(f"fixture {i} has cap {s.weight_cap}")
        gamma = gauge_flow(s, alpha, lam)
        if ode_residual(s, gamma, lam):
            bad.append(f"fixture {i}: ODE residual")
        if poly_at(gamma, 0) != s.truncate(alpha):
            bad.append(f"fixture {i}: gamma(0)")
        if not s.is_mc(poly_at(gamma, 1)):
            bad.append(f"fixture {i}: gamma(1) not MC")
        if gauge_act(s, alpha, {}) != s.truncate(alpha):
            bad.append(f"fixture {i}: 0 . alpha")
    return not bad, "; ".join(bad) or "25 fixtures"


# --- 7 ----------------------------------------------------------------------------------------

def twisted_differential_check() -> Result:
    bad = []
    for i, (s, alpha, lam) in enumerate(gauge_fixtures(count=12, seed=7)):
        beta = gauge_act(s, alpha, lam)
        for a in (alpha, beta):
            D = s.twisted_differential(a)
            for x in s.space.names():
                if D(D({x: Fraction(1)})):
                    bad.append(f"fixture {i}: (d^a)^2 on {x}")
                    break
        for deg in sorted(s.space.dims()):
            ha = homology(s.twisted_differential(alpha), deg)[0]
            hb = homology(s.twisted_differential(beta), deg)[0]
            if ha != hb:
                bad.append(f"fixture {i}: H_{deg} {ha} vs {hb}")
    return not bad, "; ".join(bad) or "12 gauge-related pairs"


# --- 8 -------------------------------------------------------------------------------------------

def cellular_boundary(I):
    return [(I[:l] + I[l + 1:], (-1) ** l) for l in range(len(I))] if len(I) > 1 else []


def is_chain_map(s, phi: TwistingMorphism) -> bool:
    for I in DP.faces_of(phi.n):
        lhs = {}
        for J, c in cellular_boundary(I):
            vadd_into(lhs, phi[J], c)
        vadd_into(lhs, s.apply_d(phi[I]), -1)
        if s.truncate(lhs):
            return False
    return True


def dold_kan(seed: int = 3, trials: int = 12) -> Result:
    rng = random.Random(seed)
    bad = []
    agree = positives = 0
    for _ in range(trials):
        s = random_abelian(rng)
        for n in range(3):
            psi = {I: _random_in_degree(s, len(I), rng) for I in DP.faces_of(n)}
            phi = {}
            for I in DP.faces_of(n):
                v = s.apply_d(psi[I])
                for J, c in cellular_boundary(I):
                    vadd_into(v, psi[J], c)
                phi[I] = {k: c for k, c in v.items() if c}
            for variant in (phi, _perturb(s, phi, rng)):
                tm = TwistingMorphism(n, s, variant)
                a, b = is_twisting(tm)[0], is_chain_map(s, tm)
                agree += a == b
                positives += b
                if a != b:
                    bad.append(f"n={n}: twisting {a}, chain map {b}")
        # MC elements of an abelian structure are the degree-0 cycles
        D = s.differential_map()
        for alpha in ({}, _random_cycle(s, rng)):
            for deg in sorted(s.space.dims()):
                if deg >= 1 and homotopy_group(s, alpha, deg)[0] != homology(D, deg)[0]:
                    bad.append(f"pi_{deg} differs from H_{deg}")
    return not bad, "; ".join(bad[:3]) or f"{agree} assignments agree ({positives} chain maps)"


def _random_in_degree(s, deg, rng):
    return {a: Fraction(rng.randint(-2, 2)) for a in s.space.names(deg) if rng.random() < 0.7}


def _perturb(s, phi, rng, tries: int = 20):
    """Add a random basis vector somewhere, preferring changes that break the chain condition."""
    out = phi
    for _ in range(tries):
        out = {I: dict(v) for I, v in phi.items()}
        I = rng.choice(list(out))
        names = s.space.names(len(I) - 1)
        if not names:
            continue
        a = rng.choice(names)
        out[I][a] = out[I].get(a, 0) + 1
        if not is_chain_map(s, TwistingMorphism(max(len(J) for J in out) - 1, s, out)):
            return out
    return out


def _random_cycle(s, rng):
    D = s.differential_map()
    v = _random_in_degree(s, 0, rng)
    return v if not D(v) else {}


# --- 9 ------------------------------------------------------------------------------------------

def convolution_check(seed: int = 5, trials: int = 30) -> Result:
    bad = []
    s = free_lie_forms(2, 1, 2)
    C = TR.UccCoalgebra(1)
    conv = convolution(C, s)
    fl = conv.check()
    if fl:
        bad.append(f"hom(C(Delta^1), g) fails at {fl[0][:2]}")
    for other in (heisenberg(), free_lie_forms(3, 1, 2), curved_heisenberg_forms(3)[0]):
        fo = convolution(C, other).check()
        if fo:
            bad.append(f"{other.name}: {fo[0][:2]}")
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        alpha = random_degree_zero(s, rng)
        lam = random_degree_one(s, rng)
        target = gauge_act(s, alpha, lam)
        for beta in (target, random_degree_zero(s, rng), _bump(s, target, rng)):
            beta = {a: c for a, c in beta.items() if c}
            phi = {}
            for J, v in (("0", alpha), ("1", beta), ("01", lam)):
                for a, c in v.items():
                    phi[f"{a}@{J}"] = c
            mc = conv.is_mc(phi)
            rel = s.is_mc(alpha) and s.is_mc(beta) and beta == target
            hits += rel
            if mc != rel:
                bad.append(f"alpha={alpha}, lambda={lam}, beta={beta}")
    return not bad, "; ".join(bad[:3]) or f"{3 * trials} triples, {hits} gauge-related"


def _bump(s, v, rng):
    out = dict(v)
    a = rng.choice(s.space.names(0))
    out[a] = out.get(a, 0) + 1
    return out


# --- 10 -----------------------------------------------------------------------------------------

def nerve_faces(seed: int = 11, trials: int = 5) -> Result:
    s = heisenberg()
    rng = random.Random(seed)
    bad = []
    for _ in range(trials):
        for n in range(1, 4):
            lams = [{a: Fraction(rng.randint(-3, 3), rng.randint(1, 2)) for a in "xyz"} for _ in range(n)]
            sim = nerve_simplex(s, lams)
            if not is_twisting(sim)[0]:
                bad.append(f"n={n} not twisting")
            for j in range(n + 1):
                if n == 1:
                    continue
                got = {I: v for I, v in sim.face(j).assignment.items() if v}
                want = {I: v for I, v in nerve_simplex(s, nerve_face(s, lams, j)).assignment.items() if v}
                if got != want:
                    bad.append(f"n={n} face {j}")
    return not bad, "; ".join(bad[:3]) or f"face identities for n <= 3, {trials} random tuples"


CRITERIA: List[Tuple[str, Callable[[], Result]]] = [
    ("dupont identities", dupont_identities),
    ("tree layer", tree_layer),
    ("mc^n curvature", mcn_curvature),
    ("cork vanishing", cork_vanishing),
    ("classical BCH recovery", bch_recovery),
    ("gauge flow", gauge_flow_check),
    ("twisted differential", twisted_differential_check),
    ("Dold-Kan degeneration", dold_kan),
    ("convolution", convolution_check),
    ("nerve", nerve_faces),
]


def run_all(report=print) -> bool:
    ok_all = True
    for i, (name, fn) in enumerate(CRITERIA, start=1):
        t = time.time()
        ok, detail = fn()
        ok_all &= ok
        report(f"[{'PASS' if ok else 'FAIL'}] {i:2d}. {name}: {detail} ({time.time() - t:.1f}s)")
    return ok_all
