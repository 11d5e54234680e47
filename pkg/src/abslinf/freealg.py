"""Free weight-truncated curved L-infinity algebras on graded generators.

Elements are dicts ``{key: Fraction}`` over labeled corked trees:

    ('g', name)              a generator
    ('*',)                   the cork (curvature)
    ('v', (k1, ..., km))     the operation l_m on the subtrees, m >= 2

Subtrees are kept sorted; reordering them costs the Koszul sign, so a key
stands for a coinvariant class.  The weight of a key is its number of
vertices (corks included) plus the weights of its generators, so every l_m
raises weight by one.  Given the pre-differential on generators, D extends to
all trees through the structure relations (l_1 = D).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Mapping, Optional, Sequence, Tuple

from .exactlin import InputError, koszul_sign, vadd_into
from . import trees as T

CORK = ("*",)


def gen(name) -> tuple:
    return ("g", name)


class FreeAlgebra:
    def __init__(self, degrees: Mapping[str, int], weight_cap: int,
                 weights: Optional[Mapping[str, int]] = None):
        self.gdeg = dict(degrees)
        self.gweight = {g: (weights or {}).get(g, 1) for g in self.gdeg}
        self.cap = weight_cap
        self.dgen: Dict[str, dict] = {}
        self._dcache: Dict[tuple, dict] = {}

    # --- keys ---------------------------------------------------------------------

    @lru_cache(maxsize=None)
    def degree(self, key) -> int:
        if key[0] == "g":
            return self.gdeg[key[1]]
        if key == CORK:
            return -1
        return -1 + sum(self.degree(c) for c in key[1])

    @lru_cache(maxsize=None)
    def weight(self, key) -> int:
        if key[0] == "g":
            return self.gweight[key[1]]
        if key == CORK:
            return 1
        return 1 + sum(self.weight(c) for c in key[1])

    def shape(self, key):
        """(unlabeled tree, generator labels in leaf preorder)."""
        if key[0] == "g":
            return T.LEAF, [key[1]]
        if key == CORK:
            return T.CORK, []
        kids = [self.shape(c) for c in key[1]]
        # vertex() sorts children; keep labels aligned with the sorted order
        order = sorted(range(len(kids)), key=lambda i: kids[i][0])
        tree = ("v", tuple(kids[i][0] for i in order))
        labels = [x for i in order for x in kids[i][1]]
        return tree, labels

    def truncate(self, v: Mapping) -> dict:
        return {k: c for k, c in v.items() if c and self.weight(k) < self.cap}

    def make(self, children: Sequence[tuple]) -> Tuple[int, Optional[tuple]]:
        """(sign, canonical key) of l_m(children), sign 0 if it vanishes."""
        m = len(children)
        if m == 1:
            raise InputError("l_1 is the differential")
        if m == 0:
            return 1, CORK
        order = sorted(range(m), key=lambda i: children[i])
        degs = [self.degree(c) for c in children]
        sign = koszul_sign([i + 1 for i in order], degs)
        kids = tuple(children[i] for i in order)
        for a, b in zip(kids, kids[1:]):
            if a == b and self.degree(a) % 2:
                return 0, None
        return sign, ("v", kids)

    # --- operations -----------------------------------------------------------------

    def l(self, *vecs: Mapping) -> dict:
        out: dict = {}
        for combo in product(*[list(v.items()) for v in vecs]):
            w = sum(self.weight(k) for k, _ in combo) + 1
            if w >= self.cap:
                continue
            sign, key = self.make([k for k, _ in combo])
            if not sign:
                continue
            c = sign
            for _, x in combo:
                c *= x
            vadd_into(out, {key: c})
        return out

    def set_d(self, table: Mapping[str, Mapping]):
        for g, v in table.items():
            if g not in self.gdeg:
                raise InputError(f"unknown generator {g}")
            for k in v:
                if self.degree(k) != self.gdeg[g] - 1:
                    raise InputError(f"D({g}) has a term of degree {self.degree(k)}")
            self.dgen[g] = self.truncate(v)
        self._dcache.clear()

    def D(self, v: Mapping) -> dict:
        out: dict = {}
        for k, c in v.items():
            vadd_into(out, self._D_key(k), c)
        return out

    def _D_key(self, key) -> dict:
        if key in self._dcache:
            return self._dcache[key]
        if key[0] == "g":
            res = dict(self.dgen.get(key[1], {}))
        elif key == CORK:
            res = {}
        else:
            kids = list(key[1])
            m = len(kids)
            degs = [self.degree(k) for k in kids]
            res = {}
            for i in range(m):
                sign = (-1) ** sum(degs[:i])
                dk = self._D_key(kids[i])
                if dk:
                    vecs = [{k: Fraction(1)} for k in kids]
                    vecs[i] = dk
                    vadd_into(res, self.l(*vecs), -sign)
            for S, R in _splits(m):
                eps = koszul_sign([i + 1 for i in S + R], degs)
                inner = self.l(*[{kids[i]: Fraction(1)} for i in S])
                if inner:
                    vadd_into(res, self.l(inner, *[{kids[i]: Fraction(1)} for i in R]), -eps)
            res = self.truncate(res)
        self._dcache[key] = res
        return res

    def curvature_defect(self, v: Mapping) -> dict:
        """D^2 v + l_2(theta, v); zero for a curved L-infinity algebra."""
        out = self.D(self.D(v))
        vadd_into(out, self.l({CORK: Fraction(1)}, v))
        return self.truncate(out)

    # --- evaluation in a structure --------------------------------------------------

    def evaluate(self, v: Mapping, s, assignment: Mapping[str, Mapping]) -> dict:
        """Image under the morphism sending each generator to assignment[g]."""
        cache: Dict[tuple, dict] = {}

        def go(key):
            if key in cache:
                return cache[key]
            if key[0] == "g":
                res = s.truncate(assignment.get(key[1], {}))
            elif key == CORK:
                res = s.theta
            else:
                vals = [go(c) for c in key[1]]
                res = {} if any(not x for x in vals) else s.l(len(vals), *vals)
            cache[key] = res
            return res

        out: dict = {}
        for k, c in v.items():
            vadd_into(out, go(k), c)
        return s.truncate(out)

    # --- rendering ---------------------------------------------------------------------

    def render_key(self, key) -> str:
        if key[0] == "g":
            return str(key[1])
        if key == CORK:
            return "*"
        return "(" + " ".join(self.render_key(c) for c in key[1]) + ")"


def _splits(m: int):
    """Unshuffles (S, R) contributing l_p(l_q(..), ..) with p >= 2, q != 1."""
    from itertools import combinations
    for q in [0] + list(range(2, m)):
        for S in combinations(range(m), q):
            R = tuple(i for i in range(m) if i not in S)
            yield S, R


def parse_key(text: str) -> tuple:
    """Inverse of render_key for generator names without spaces or parentheses."""
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "*":
            return CORK
        if tok == "(":
            kids = []
            while tokens[pos] != ")":
                kids.append(read())
            pos += 1
            return ("v", tuple(kids))
        return gen(tok)

    return read()
