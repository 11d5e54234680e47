"""Free nilpotent Lie algebras (Hall basis) and a truncated log/exp oracle.

Lie elements are realised inside the free associative algebra on the
generators, truncated at word length c; a Lie polynomial is read back in the
Hall basis by an exact linear solve.  The resulting algebra is placed in
degree 1 of a curved L-infinity structure with l_2 = bracket, and a bracket of
length r gets weight 2r - 1 so that l_2 raises weight by one.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Mapping, Sequence, Tuple

from .clinfty import CurvedLinfty
from .exactlin import GradedSpace, InputError, PreconditionError, rref, vadd_into, vscale

Word = Tuple[str, ...]
Poly = Dict[Word, Fraction]


# --- truncated free associative algebra --------------------------------------

def pmul(u: Mapping, v: Mapping, maxlen: int) -> Poly:
    out: Poly = {}
    for a, x in u.items():
        for b, y in v.items():
            if len(a) + len(b) <= maxlen:
                w = a + b
                out[w] = out.get(w, 0) + x * y
    return {w: c for w, c in out.items() if c}


def pbracket(u, v, maxlen):
    return vadd_into(pmul(u, v, maxlen), pmul(v, u, maxlen), -1)


def pexp(x: Mapping, maxlen: int) -> Poly:
    out: Poly = {(): Fraction(1)}
    term: Poly = {(): Fraction(1)}
    for k in range(1, maxlen + 1):
        term = vscale(pmul(term, x, maxlen), Fraction(1, k))
        vadd_into(out, term)
    return {w: c for w, c in out.items() if c}


def plog(x: Mapping, maxlen: int) -> Poly:
    """log(x) for x with constant term 1."""
    if x.get((), 0) != 1:
        raise InputError("log needs constant term 1")
    y = {w: c for w, c in x.items() if w}
    out: Poly = {}
    power: Poly = {(): Fraction(1)}
    for k in range(1, maxlen + 1):
        power = pmul(power, y, maxlen)
        vadd_into(out, power, Fraction((-1) ** (k + 1), k))
    return {w: c for w, c in out.items() if c}


def bch_oracle(x: Mapping, y: Mapping, maxlen: int) -> Poly:
    """log(exp(x) exp(y)) truncated at word length ``maxlen``."""
    return plog(pmul(pexp(x, maxlen), pexp(y, maxlen), maxlen), maxlen)


# --- Hall basis -----------------------------------------------------------------

def hall_basis(gens: Sequence[str], c: int) -> List[tuple]:
    """Basic commutators of length <= c as nested pairs; generators are strings.

    Order: by length, then by construction order.  [u, v] is basic when
    u > v and, if u = [u1, u2], then u2 <= v.
    """
    layers: List[List] = [[], list(gens)]
    order: List = list(gens)
    for n in range(2, c + 1):
        new = []
        for ln in range(1, n):
            for u in layers[ln]:
                for v in layers[n - ln]:
                    iu, iv = order.index(u), order.index(v)
                    if iu <= iv:
                        continue
                    if isinstance(u, tuple) and order.index(u[1]) > iv:
                        continue
                    new.append((u, v))
        layers.append(new)
        order += new
    return order


def length(h) -> int:
    return 1 if isinstance(h, str) else length(h[0]) + length(h[1])


def expand(h, maxlen: int) -> Poly:
    if isinstance(h, str):
        return {(h,): Fraction(1)}
    return pbracket(expand(h[0], maxlen), expand(h[1], maxlen), maxlen)


def render_hall(h) -> str:
    return h if isinstance(h, str) else f"[{render_hall(h[0])},{render_hall(h[1])}]"


class FreeNilpotentLie:
    """Free nilpotent Lie algebra of class ``c`` with its Hall basis."""

    def __init__(self, gens: Sequence[str], c: int, names: Mapping = None):
        self.gens = list(gens)
        self.c = c
        self.hall = hall_basis(gens, c)
        self.name = {h: (names or {}).get(h, render_hall(h)) for h in self.hall}
        self.by_name = {v: k for k, v in self.name.items()}
        self.words: List[Word] = sorted({w for h in self.hall for w in expand(h, c)})
        self._expanded = {h: expand(h, c) for h in self.hall}

    def to_poly(self, v: Mapping[str, Fraction]) -> Poly:
        out: Poly = {}
        for n, x in v.items():
            vadd_into(out, self._expanded[self.by_name[n]], x)
        return out

    def _projector(self):
        """Rows (words) on which the Hall expansions are independent, and the
        inverse of that square block."""
        if getattr(self, "_proj", None) is None:
            cols = [[self._expanded[h].get(w, Fraction(0)) for w in self.words] for h in self.hall]
            # pivots of the transposed matrix pick independent words
            _, piv = rref(cols)
            rows = [self.words[j] for j in piv]
            square = [[self._expanded[h].get(w, Fraction(0)) for h in self.hall] for w in rows]
            n = len(self.hall)
            aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(square)]
            red, _ = rref(aug)
            self._proj = (rows, [r[n:] for r in red])
        return self._proj

    def from_poly(self, p: Mapping) -> Dict[str, Fraction]:
        """Hall coordinates of a Lie polynomial (raises if p is not Lie)."""
        p = {w: c for w, c in p.items() if c and w}
        if not p:
            return {}
        rows, inv = self._projector()
        rhs = [Fraction(p.get(w, 0)) for w in rows]
        x = [sum((a * b for a, b in zip(r, rhs)), Fraction(0)) for r in inv]
        back: Poly = {}
        for h, c in zip(self.hall, x):
            if c:
                vadd_into(back, self._expanded[h], c)
        if {w: c for w, c in back.items() if c} != p:
            raise PreconditionError("not a Lie polynomial", witness=p)
        return {self.name[h]: c for h, c in zip(self.hall, x) if c}

    def bracket(self, a: str, b: str) -> Dict[str, Fraction]:
        return self.from_poly(pbracket(self._expanded[self.by_name[a]],
                                       self._expanded[self.by_name[b]], self.c))

    def structure(self) -> CurvedLinfty:
        return lie_structure([self.name[h] for h in self.hall],
                             {self.name[h]: 2 * length(h) - 1 for h in self.hall},
                             2 * self.c,
                             {(a, b): self.bracket(a, b) for a in self.name.values()
                              for b in self.name.values()},
                             name=f"free nilpotent Lie, class {self.c}")

    def bch(self, x: Mapping, y: Mapping) -> Dict[str, Fraction]:
        return self.from_poly(bch_oracle(self.to_poly(x), self.to_poly(y), self.c))


def lie_structure(names: Sequence[str], weights: Mapping[str, int], cap: int,
                  brackets: Mapping[tuple, Mapping], name: str = "") -> CurvedLinfty:
    """A Lie algebra placed in degree 1: l_2(x, y) = [x, y] on the sorted pair."""
    space = GradedSpace([(n, 1) for n in names])
    idx = {n: i for i, n in enumerate(names)}
    ops = {}
    for (a, b), v in brackets.items():
        if idx[a] < idx[b] and v:
            ops[(a, b)] = v
    return CurvedLinfty(space, weights, cap, ops={2: ops}, name=name)


def heisenberg() -> CurvedLinfty:
    """[x, y] = z, in degree 1, cap 4."""
    return lie_structure(["x", "y", "z"], {"x": 1, "y": 1, "z": 3}, 4,
                         {("x", "y"): {"z": Fraction(1)}}, name="heisenberg")


def abelian_lie(names: Sequence[str], cap: int = 4) -> CurvedLinfty:
    return lie_structure(names, {n: 1 for n in names}, cap, {}, name="abelian")


def is_degree_one_lie(s: CurvedLinfty) -> bool:
    return (all(d == 1 for d in s.space.degree.values()) and not s.theta
            and set(s.op_arities()) <= {2})
