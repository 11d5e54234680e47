"""Polynomial forms on the n-simplex and the Dupont contraction.

A form on Delta^n is a dict ``{(exps, S): Fraction}`` meaning
``c * t_1^e_1 ... t_n^e_n dt_S`` with S a sorted tuple from 1..n; t_0 and
dt_0 are eliminated through t_0 = 1 - sum t_i, dt_0 = - sum dt_i.  The
homological degree of dt_S is -|S|.

Whitney cochains are dicts ``{I: Fraction}`` with I a sorted tuple of
vertices; omega_I has degree -(|I| - 1).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial
from typing import Dict, Iterable, List, Tuple

from .exactlin import InputError, vadd_into

Form = Dict[Tuple[tuple, tuple], Fraction]
Cochain = Dict[tuple, Fraction]


# --- elementary forms -------------------------------------------------------

def one(n: int) -> Form:
    return {((0,) * n, ()): Fraction(1)}


def t(n: int, i: int) -> Form:
    if not 0 <= i <= n:
        raise InputError(f"t_{i} does not exist on Delta^{n}")
    if i == 0:
        out = one(n)
        for j in range(1, n + 1):
            out[(_unit(n, j), ())] = Fraction(-1)
        return out
    return {(_unit(n, i), ()): Fraction(1)}


def dt(n: int, i: int) -> Form:
    if not 0 <= i <= n:
        raise InputError(f"dt_{i} does not exist on Delta^{n}")
    z = (0,) * n
    if i == 0:
        return {(z, (j,)): Fraction(-1) for j in range(1, n + 1)}
    return {(z, (i,)): Fraction(1)}


def _unit(n, i):
    return tuple(int(k == i - 1) for k in range(n))


def form_degree(u: Form) -> int | None:
    degs = {-len(S) for (_, S), c in u.items() if c}
    if len(degs) > 1:
        raise InputError("inhomogeneous form")
    return degs.pop() if degs else None


def poly_degree(u: Form) -> int:
    return max((sum(e) for (e, _), c in u.items() if c), default=0)


def _merge(S, T):
    """dt_S ^ dt_T as (sign, sorted union) or None."""
    if set(S) & set(T):
        return None
    inv = sum(1 for a in S for b in T if a > b)
    return (-1) ** inv, tuple(sorted(S + T))


def wedge(u: Form, v: Form) -> Form:
    out: Form = {}
    for (e1, S), a in u.items():
        for (e2, T), b in v.items():
            m = _merge(S, T)
            if m is None:
                continue
            sign, U = m
            key = (tuple(x + y for x, y in zip(e1, e2)), U)
            c = out.get(key, 0) + sign * a * b
            if c:
                out[key] = c
            else:
                out.pop(key)
    return out


def wedge_all(n: int, forms: Iterable[Form]) -> Form:
    out = one(n)
    for f in forms:
        out = wedge(out, f)
    return out


def dform(u: Form) -> Form:
    """Exterior derivative."""
    out: Form = {}
    for (e, S), c in u.items():
        for i, a in enumerate(e):
            if not a or (i + 1) in S:
                continue
            sign, U = _merge((i + 1,), S)
            e2 = list(e)
            e2[i] -= 1
            vadd_into(out, {(tuple(e2), U): sign * a * c})
    return out


def whitney(n: int, I) -> Form:
    """k! sum_l (-1)^l t_{i_l} dt_{i_0} .. (omit l) .. dt_{i_k}."""
    I = tuple(sorted(I))
    if not I:
        raise InputError("Whitney form of the empty face")
    if len(set(I)) != len(I) or not all(0 <= i <= n for i in I):
        raise InputError(f"bad face {I} of Delta^{n}")
    k = len(I) - 1
    out: Form = {}
    for l, il in enumerate(I):
        term = t(n, il)
        for m, im in enumerate(I):
            if m != l:
                term = wedge(term, dt(n, im))
        vadd_into(out, term, (-1) ** l * factorial(k))
    return out


# --- pullbacks ---------------------------------------------------------------

def _bary(k: int, m: int) -> dict:
    """Barycentric coordinate s_m of Delta^k as an affine form {0: const, j: coef}."""
    if m == 0:
        out = {0: Fraction(1)}
        out.update({j: Fraction(-1) for j in range(1, k + 1)})
        return out
    return {m: Fraction(1)}


def _affine_form(k: int, aff: dict) -> Form:
    out: Form = {}
    z = (0,) * k
    for j, c in aff.items():
        key = (z, ()) if j == 0 else (_unit(k, j), ())
        vadd_into(out, {key: c})
    return out


def _affine_diff(k: int, aff: dict) -> Form:
    z = (0,) * k
    return {(z, (j,)): c for j, c in aff.items() if j != 0 and c}


def pullback(u: Form, k: int, images: List[dict]) -> Form:
    """Pull back along an affine map Delta^k -> Delta^n.

    ``images[i-1]`` is the affine form (in the target coordinates of Delta^k)
    giving the pullback of t_i, i = 1..n.
    """
    tf = [_affine_form(k, a) for a in images]
    dtf = [_affine_diff(k, a) for a in images]

    @lru_cache(maxsize=None)
    def power(i, a):
        if a == 0:
            return one(k)
        return wedge(power(i, a - 1), tf[i])

    out: Form = {}
    for (e, S), c in u.items():
        term = one(k)
        for i, a in enumerate(e):
            if a:
                term = wedge(term, power(i, a))
        for s in S:
            term = wedge(term, dtf[s - 1])
        vadd_into(out, term, c)
    return out


def _vertex_map(n: int, k: int, f) -> List[dict]:
    """Affine images of t_1..t_n for the simplicial map with vertex map f: [k] -> [n]."""
    images = []
    for i in range(1, n + 1):
        aff: dict = {}
        for m in range(k + 1):
            if f(m) == i:
                vadd_into(aff, _bary(k, m))
        images.append(aff)
    return images


def face(n: int, j: int, u: Form) -> Form:
    """Pullback along the j-th coface Delta^{n-1} -> Delta^n (vertex j skipped)."""
    if not 0 <= j <= n or n < 1:
        raise InputError(f"face index {j} out of range for n={n}")
    return pullback(u, n - 1, _vertex_map(n, n - 1, lambda m: m if m < j else m + 1))


def degeneracy(n: int, j: int, u: Form) -> Form:
    """Pullback along the j-th codegeneracy Delta^{n+1} -> Delta^n (j, j+1 merged)."""
    if not 0 <= j <= n:
        raise InputError(f"degeneracy index {j} out of range for n={n}")
    return pullback(u, n + 1, _vertex_map(n, n + 1, lambda m: m if m <= j else m - 1))


def restrict(n: int, I, u: Form) -> Form:
    """Restriction to the face spanned by the vertices I."""
    I = tuple(sorted(I))
    return pullback(u, len(I) - 1, _vertex_map(n, len(I) - 1, lambda m: I[m]))


def cochain_face(n: int, j: int, w: Cochain) -> Cochain:
    out: Cochain = {}
    for I, c in w.items():
        if j in I:
            continue
        vadd_into(out, {tuple(i if i < j else i - 1 for i in I): c})
    return out


def cochain_degeneracy(n: int, j: int, w: Cochain) -> Cochain:
    out: Cochain = {}
    sig = lambda m: m if m <= j else m - 1
    for I, c in w.items():
        for J in combinations(range(n + 2), len(I)):
            if tuple(sig(m) for m in J) == I:
                vadd_into(out, {J: c})
    return out


def cochain_d(n: int, w: Cochain) -> Cochain:
    """Cellular differential matching d on Whitney forms: d w_I = sum_j w_{jI}."""
    out: Cochain = {}
    for I, c in w.items():
        for j in range(n + 1):
            if j in I:
                continue
            J = tuple(sorted(I + (j,)))
            pos = J.index(j)
            vadd_into(out, {J: (-1) ** pos * c})
    return out


# --- integration ---------------------------------------------------------------

def integrate(n: int, u: Form) -> Fraction:
    """Integral over Delta^n of a top-degree form, with orientation dt_1...dt_n."""
    top = tuple(range(1, n + 1))
    total = Fraction(0)
    for (e, S), c in u.items():
        if S != top:
            raise InputError("integrate needs a form of top exterior degree")
        num = 1
        for a in e:
            num *= factorial(a)
        total += c * Fraction(num, factorial(n + sum(e)))
    return total


# --- the contraction ----------------------------------------------------------------

def faces_of(n: int) -> List[tuple]:
    return [I for k in range(1, n + 2) for I in combinations(range(n + 1), k)]


def i_map(n: int, w: Cochain) -> Form:
    out: Form = {}
    for I, c in w.items():
        vadd_into(out, _whitney_cached(n, I), c)
    return out


@lru_cache(maxsize=None)
def _whitney_cached(n, I):
    return whitney(n, I)


def p_map(n: int, u: Form) -> Cochain:
    """p(u) = sum_I (integral of u over the face I) omega_I."""
    out: Cochain = {}
    by_deg: Dict[int, Form] = {}
    for (e, S), c in u.items():
        by_deg.setdefault(len(S), {})[(e, S)] = c
    for k, part in by_deg.items():
        for I in combinations(range(n + 1), k + 1):
            r = restrict(n, I, part)
            r = {key: c for key, c in r.items() if c}
            if r:
                x = integrate(k, r)
                if x:
                    out[I] = out.get(I, 0) + x
    return {I: c for I, c in out.items() if c}


def h_vertex(n: int, j: int, u: Form) -> Form:
    """Fibre integral of the straight-line contraction of Delta^n onto vertex j."""
    out: Form = {}
    for (e, S), c in u.items():
        if not S:
            continue
        # pullback of the polynomial part as a polynomial in s: {s_power: Form}
        if j == 0:
            poly = {sum(e): {(tuple(e), ()): Fraction(1)}}
        else:
            aj = e[j - 1]
            base = list(e)
            base[j - 1] = 0
            s0 = sum(base)
            poly = {}
            # (1 - s + s t_j)^aj = sum over b + c2 + f = aj
            for f in range(aj + 1):
                for c2 in range(aj - f + 1):
                    coef = Fraction(factorial(aj), factorial(aj - f - c2) * factorial(c2) * factorial(f)) * (-1) ** c2
                    ee = list(base)
                    ee[j - 1] += f
                    vadd_into(poly.setdefault(s0 + c2 + f, {}), {(tuple(ee), ()): coef})
        r = len(S)
        for pos, si in enumerate(S):
            others = S[:pos] + S[pos + 1:]
            # coefficient form (t_si - delta) dt_others
            lin = t(n, si) if si != j else vadd_into(t(n, si), one(n), -1)
            lin = wedge(lin, {((0,) * n, others): Fraction(1)})
            for sp, pf in poly.items():
                w = Fraction(1, sp + (r - 1) + 1)
                vadd_into(out, wedge(pf, lin), (-1) ** pos * c * w)
    return out


class Contraction:
    """(i_n, p_n, h_n) for Delta^n.

    h = sum_{k<n} (-1)^(k+1) sum_{|I|=k+1} omega_I ^ h_{i_k} ... h_{i_0}, where
    h_j is the fibre integral of the straight-line contraction onto vertex j
    (h_{i_0} applied first).  With these signs i p - id = d h + h d.
    """

    def __init__(self, n: int):
        if n < 0:
            raise InputError("n must be >= 0")
        self.n = n
        self.faces = faces_of(n)
        self._h_cache: Dict[tuple, Form] = {}

    def i(self, w: Cochain) -> Form:
        return i_map(self.n, w)

    def p(self, u: Form) -> Cochain:
        return p_map(self.n, u)

    def h(self, u: Form) -> Form:
        out: Form = {}
        for key, c in u.items():
            if key not in self._h_cache:
                self._h_cache[key] = self._h_mono(key)
            vadd_into(out, self._h_cache[key], c)
        return out

    def _h_mono(self, key) -> Form:
        n = self.n
        u = {key: Fraction(1)}
        out: Form = {}
        for k in range(n):
            for I in combinations(range(n + 1), k + 1):
                v = u
                for i in I:
                    v = h_vertex(n, i, v)
                    if not v:
                        break
                if v:
                    vadd_into(out, wedge(_whitney_cached(n, I), v), (-1) ** (k + 1))
        return out


# --- certification ---------------------------------------------------------------------

def monomials(n: int, max_deg: int) -> List[tuple]:
    out = []
    for k in range(n + 1):
        for S in combinations(range(1, n + 1), k):
            for total in range(max_deg + 1):
                for exps in _compositions(total, n):
                    out.append((exps, S))
    return out


def _compositions(total: int, parts: int):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


IDENTITIES = ("p i = id", "i p - id = d h + h d", "h h = 0", "p h = 0", "h i = 0")


def _diff(a, b):
    out = dict(a)
    vadd_into(out, b, -1)
    return {k: c for k, c in out.items() if c}


def check_identities(n: int, max_deg: int = 6) -> Dict[str, list]:
    """Failures (witness monomials or cochains) per contraction identity."""
    C = Contraction(n)
    fails: Dict[str, list] = {name: [] for name in IDENTITIES}
    for I in faces_of(n):
        w = {I: Fraction(1)}
        if _diff(C.p(C.i(w)), w):
            fails["p i = id"].append(I)
        if C.h(C.i(w)):
            fails["h i = 0"].append(I)
    for key in monomials(n, max_deg):
        u = {key: Fraction(1)}
        hu = C.h(u)
        lhs = _diff(C.i(C.p(u)), u)
        rhs = dform(hu)
        vadd_into(rhs, C.h(dform(u)))
        if _diff(lhs, rhs):
            fails["i p - id = d h + h d"].append(key)
        if C.h(hu):
            fails["h h = 0"].append(key)
        if C.p(hu):
            fails["p h = 0"].append(key)
    return fails


def check_simplicial(n: int, max_deg: int = 6, degeneracy_deg: int | None = None) -> List[tuple]:
    """Failures of i, p, h commuting with faces out of Delta^n and
    degeneracies into Delta^(n+1); each entry is (map, operator, j, witness)."""
    bad = []
    C = Contraction(n)
    dd = max_deg if degeneracy_deg is None else degeneracy_deg
    for I in faces_of(n):
        w = {I: Fraction(1)}
        for j in range(n + 1):
            if n >= 1 and _diff(face(n, j, C.i(w)), i_map(n - 1, cochain_face(n, j, w))):
                bad.append(("face", "i", j, I))
            if _diff(degeneracy(n, j, C.i(w)), i_map(n + 1, cochain_degeneracy(n, j, w))):
                bad.append(("degeneracy", "i", j, I))
    lower = Contraction(n - 1) if n >= 1 else None
    upper = Contraction(n + 1)
    for key in monomials(n, max_deg):
        u = {key: Fraction(1)}
        hu, pu = C.h(u), C.p(u)
        for j in range(n + 1):
            if lower is not None:
                fu = face(n, j, u)
                if _diff(face(n, j, hu), lower.h(fu)):
                    bad.append(("face", "h", j, key))
                if _diff(cochain_face(n, j, pu), lower.p(fu)):
                    bad.append(("face", "p", j, key))
            if sum(key[0]) <= dd:
                su = degeneracy(n, j, u)
                if _diff(degeneracy(n, j, hu), upper.h(su)):
                    bad.append(("degeneracy", "h", j, key))
                if _diff(cochain_degeneracy(n, j, pu), upper.p(su)):
                    bad.append(("degeneracy", "p", j, key))
    return bad


# --- text ------------------------------------------------------------------------------

def render_form(u: Form) -> str:
    """``3/2 t1^2 t2 dt1^dt2 + ...`` (``1`` for the unit)."""
    if not u:
        return "0"
    parts = []
    for (e, S), c in sorted(u.items(), key=lambda kv: (len(kv[0][1]), sum(kv[0][0]), kv[0])):
        mono = []
        for i, a in enumerate(e, start=1):
            if a:
                mono.append(f"t{i}" + (f"^{a}" if a > 1 else ""))
        if S:
            mono.append("^".join(f"dt{i}" for i in S))
        body = " ".join(mono)
        mag = abs(c)
        coef = "" if mag == 1 and body else (f"{mag.numerator}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}")
        term = " ".join(x for x in (coef, body) if x)
        parts.append(("- " if c < 0 else "+ ") + term)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[2:]


def parse_form(n: int, text: str) -> Form:
    """Inverse of render_form; t0 and dt0 are accepted and eliminated."""
    import re
    text = text.strip()
    if text == "0":
        return {}
    out: Form = {}
    tokens = text.replace("+", " + ").replace(" - ", " + -").split(" + ")
    for term in tokens:
        term = term.strip()
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:].strip()
        val: Form = one(n)
        coef = Fraction(sign)
        for tok in term.split():
            if re.fullmatch(r"\d+(/\d+)?", tok):
                coef *= Fraction(tok)
                continue
            for piece in tok.split("^") if tok.startswith("dt") else [tok]:
                m = re.fullmatch(r"dt(\d+)", piece)
                if m:
                    val = wedge(val, dt(n, int(m.group(1))))
                    continue
                m = re.fullmatch(r"t(\d+)(?:\^(\d+))?", piece)
                if not m:
                    raise InputError(f"cannot read form token {piece!r}")
                for _ in range(int(m.group(2) or 1)):
                    val = wedge(val, t(n, int(m.group(1))))
        vadd_into(out, val, coef)
    return {k: c for k, c in out.items() if c}
