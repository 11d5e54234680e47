"""Simplices of the integration functor: twisting morphisms mc^n -> g.

An n-simplex is an assignment a_I -> phi(a_I) (degree |I| - 1) such that
phi(D a_I) = d phi(a_I) for all faces I, with the cork sent to the curvature.
D(a_I) only depends on |I| (relabel the top-cell table), so tables are built
per face dimension and on demand.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import dupont as DP
from . import transfer as TR
from .clinfty import CurvedLinfty
from .exactlin import CapabilityError, InputError, PreconditionError, Vec, vadd_into, vscale
from .freealg import FreeAlgebra, gen
from .lie import is_degree_one_lie

Poly = Dict[int, Vec]   # t-power -> coefficient vector


@dataclass
class TwistingMorphism:
    n: int
    target: CurvedLinfty
    assignment: Dict[tuple, Vec] = field(default_factory=dict)

    def __getitem__(self, I) -> Vec:
        return self.assignment.get(tuple(I), {})

    def face(self, j: int) -> "TwistingMorphism":
        """Restriction to the j-th face, relabeled onto [n-1]."""
        if not 0 <= j <= self.n:
            raise InputError("face index out of range")
        keep = [v for v in range(self.n + 1) if v != j]
        out = {}
        for I in DP.faces_of(self.n - 1):
            out[I] = self[tuple(keep[i] for i in I)]
        return TwistingMorphism(self.n - 1, self.target, out)

    def to_json(self):
        from .clinfty import vec_json
        return {"n": self.n,
                "assignment": {"".join(map(str, I)): vec_json(v, self.target.index)
                               for I, v in sorted(self.assignment.items()) if v}}


# --- differential tables --------------------------------------------------------------

def _arities(s: CurvedLinfty):
    return tuple(k for k in s.op_arities() if k >= 2)


def generator_d(s: CurvedLinfty, I, max_n: int = 2) -> dict:
    """D(a_I) in the free algebra, truncated at the cap of s and restricted to
    the vertex arities that s can evaluate."""
    k = len(I) - 1
    if k > max_n:
        raise CapabilityError(f"mc^{k} tables are supported up to n = {max_n}")
    return TR.relabel(TR.top_cell(k, s.weight_cap, _arities(s)), I)


def _free_for(n: int, cap: int) -> FreeAlgebra:
    return FreeAlgebra({TR.gname(J): len(J) - 1 for J in DP.faces_of(n)}, cap)


def _equation_needed(s: CurvedLinfty, I) -> bool:
    # the equation for a_I lives in degree |I| - 2
    return (len(I) - 2) in s.space.dims()


def twisting_residual(phi: TwistingMorphism, I, max_n: int = 2) -> Vec:
    s = phi.target
    if not _equation_needed(s, I):
        return {}
    free = _free_for(phi.n, s.weight_cap)
    assignment = {TR.gname(J): phi[J] for J in DP.faces_of(phi.n)}
    # d phi(a_I) - phi(D a_I); on a vertex this is the Maurer-Cartan residual
    out = s.apply_d(phi[I])
    vadd_into(out, free.evaluate(generator_d(s, I, max_n), s, assignment), -1)
    return s.truncate(out)


def validate_assignment(phi: TwistingMorphism):
    s = phi.target
    for I, v in phi.assignment.items():
        v = s.truncate(v)
        deg = s.degree_of(v)
        if deg is not None and deg != len(I) - 1:
            raise InputError(f"phi(a_{''.join(map(str, I))}) must have degree {len(I) - 1}")


def is_twisting(phi: TwistingMorphism, max_n: int = 2) -> Tuple[bool, Optional[tuple], Vec]:
    """(ok, first failing face, residual)."""
    validate_assignment(phi)
    for I in DP.faces_of(phi.n):
        r = twisting_residual(phi, I, max_n)
        if r:
            return False, I, r
    return True, None, {}


# --- gauge flow -------------------------------------------------------------------------

def _poly_l(s: CurvedLinfty, k: int, polys: Sequence[Poly], top: int) -> Poly:
    out: Poly = {}

    def go(i, power, vecs):
        if power > top:
            return
        if i == len(polys):
            vadd_into(out.setdefault(power, {}), s.l(k, *vecs))
            return
        for p, v in polys[i].items():
            go(i + 1, power + p, vecs + [v])

    go(0, 0, [])
    return {p: v for p, v in out.items() if v}


def _twisted_on_poly(s: CurvedLinfty, gamma: Poly, lam: Vec, top: int) -> Poly:
    """d^{gamma(t)}(lambda) as a polynomial in t."""
    out: Poly = {}
    dl = s.apply_d(lam)
    if dl:
        out[0] = dict(dl)
    for k in s.op_arities():
        if k < 2:
            continue
        term = _poly_l(s, k, [gamma] * (k - 1) + [{0: lam}], top)
        for p, v in term.items():
            vadd_into(out.setdefault(p, {}), v, Fraction(1, factorial(k - 1)))
    return {p: s.truncate(v) for p, v in out.items() if s.truncate(v)}


def _integrate(poly: Poly) -> Poly:
    return {p + 1: vscale(v, Fraction(1, p + 1)) for p, v in poly.items()}


def _poly_add(a: Poly, b: Poly) -> Poly:
    out = {p: dict(v) for p, v in a.items()}
    for p, v in b.items():
        vadd_into(out.setdefault(p, {}), v)
    return {p: v for p, v in out.items() if v}


def gauge_flow(s: CurvedLinfty, alpha: Mapping, lam: Mapping, check_mc: bool = True) -> Poly:
    """The polynomial solution of d gamma/dt = d^{gamma(t)}(lambda), gamma(0) = alpha.

    Picard iteration: the t^w coefficient only depends on lower powers, and
    each power of t comes with at least one operation, so gamma has degree
    below the weight cap and the iteration stabilises.
    """
    alpha, lam = s.truncate(alpha), s.truncate(lam)
    if s.degree_of(alpha) not in (None, 0) or s.degree_of(lam) not in (None, 1):
        raise InputError("need alpha of degree 0 and lambda of degree 1")
    if check_mc:
        r = s.mc_residual(alpha)
        if r:
            raise PreconditionError("alpha is not a Maurer-Cartan element", witness=r)
    top = s.weight_cap
    start: Poly = {0: alpha} if alpha else {}
    gamma = dict(start)
    for _ in range(top + 2):
        new = _poly_add(start, _integrate(_twisted_on_poly(s, gamma, lam, top)))
        if new == gamma:
            break
        gamma = new
    else:
        raise PreconditionError("Picard iteration did not stabilise", witness=gamma)
    return gamma


def ode_residual(s: CurvedLinfty, gamma: Poly, lam: Mapping) -> Poly:
    deriv = {p - 1: vscale(v, p) for p, v in gamma.items() if p > 0}
    rhs = _twisted_on_poly(s, gamma, s.truncate(lam), s.weight_cap + len(gamma) + 1)
    out = _poly_add(deriv, {p: vscale(v, -1) for p, v in rhs.items()})
    return {p: s.truncate(v) for p, v in out.items() if s.truncate(v)}


def poly_at(gamma: Poly, t) -> Vec:
    out: Vec = {}
    for p, v in gamma.items():
        vadd_into(out, v, Fraction(t) ** p)
    return {k: c for k, c in out.items() if c}


def gauge_act(s: CurvedLinfty, alpha: Mapping, lam: Mapping) -> Vec:
    """lambda . alpha = gamma(1)."""
    return poly_at(gauge_flow(s, alpha, lam), 1)


def gauge_related(s, alpha, beta, lam) -> bool:
    return gauge_act(s, alpha, lam) == s.truncate(beta)


# --- horns, BCH, nerve --------------------------------------------------------------------

def horn_fill(s: CurvedLinfty, n: int, k: int, faces: Mapping[tuple, Mapping],
              y: Optional[Mapping] = None, max_n: int = 2) -> TwistingMorphism:
    """Canonical filler of the horn Lambda^n_k with top generator sent to y.

    The top equation is linear in the missing face with coefficient (-1)^k
    plus weight-raising terms, so it is solved by iteration.
    """
    if n < 2 or not 0 <= k <= n:
        raise InputError("a horn needs n >= 2 and 0 <= k <= n")
    top = tuple(range(n + 1))
    missing = top[:k] + top[k + 1:]
    y = s.truncate(y or {})
    if y and s.degree_of(y) != n:
        raise InputError(f"y must have degree {n}")
    assignment = {tuple(I): s.truncate(v) for I, v in faces.items()}
    for I in (top, missing):
        if assignment.get(I):
            raise InputError("horn data may not include the top cell or the missing face")
    phi = TwistingMorphism(n, s, assignment)
    validate_assignment(phi)
    for I in DP.faces_of(n):
        if I in (top, missing):
            continue
        r = twisting_residual(phi, I, max_n)
        if r:
            raise PreconditionError(f"horn is not twisting on face {I}", witness=r)
    phi.assignment[top] = y
    phi.assignment[missing] = {}
    D = generator_d(s, top, max_n)
    gm = gen(TR.gname(missing))
    lead = D.get(gm, 0)
    if abs(lead) != 1:
        raise PreconditionError("unexpected linear coefficient of the missing face")
    rest = {key: c for key, c in D.items() if key != gm}
    free = _free_for(n, s.weight_cap)
    for _ in range(s.weight_cap + 2):
        assign = {TR.gname(J): phi[J] for J in DP.faces_of(n)}
        val = s.apply_d(y)
        vadd_into(val, free.evaluate(rest, s, assign), -1)
        new = s.truncate(vscale(val, lead))
        if new == phi[missing]:
            break
        phi.assignment[missing] = new
    else:
        raise PreconditionError("horn filler iteration did not stabilise")
    return phi


def _require_lie(s):
    if not is_degree_one_lie(s):
        raise CapabilityError("BCH and nerves need a Lie algebra concentrated in degree 1")


def bch(s: CurvedLinfty, x: Mapping, y: Mapping) -> Vec:
    """log(exp x exp y) with [x, y] = l_2(x, y), as the filler of the (2,1)-horn.

    Edges compose like gauges (the edge 01 acts first), so x sits on 12 and
    y on 01.
    """
    _require_lie(s)
    phi = horn_fill(s, 2, 1, {(0, 1): y, (1, 2): x})
    return phi[(0, 2)]


def nerve_simplex(s: CurvedLinfty, lams: Sequence[Mapping]) -> TwistingMorphism:
    """Simplex with edge (i-1, i) carrying lams[i-1]; the edge (i, j) carries
    the composite lams[j-1] * .. * lams[i] (later edges act last)."""
    _require_lie(s)
    n = len(lams)
    out: Dict[tuple, Vec] = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            acc = s.truncate(lams[i])
            for m in range(i + 1, j):
                acc = bch(s, lams[m], acc)
            out[(i, j)] = acc
    return TwistingMorphism(n, s, out)


def nerve_face(s: CurvedLinfty, lams: Sequence[Mapping], j: int) -> List[Vec]:
    """Face maps of the nerve: drop an end or compose two neighbours."""
    n = len(lams)
    lams = [s.truncate(v) for v in lams]
    if j == 0:
        return lams[1:]
    if j == n:
        return lams[:-1]
    return lams[:j - 1] + [bch(s, lams[j], lams[j - 1])] + lams[j + 1:]


# --- homotopy groups ------------------------------------------------------------------------

def homotopy_group(s: CurvedLinfty, alpha: Mapping, n: int):
    """pi_n(R(g), alpha) as the twisted homology in degree n."""
    if n < 1:
        raise InputError("homotopy groups start at n = 1")
    return s.twisted_homology(alpha, n)
