"""Curved L-infinity structures on weight-graded spaces (shifted convention).

Operations l_n (n != 1) are symmetric of degree -1, l_1 is the pre-differential
d and l_0 is the curvature theta.  The structure relations used throughout are

    sum_{p+q=n+1} sum_{unshuffles s} eps(s) l_p(l_q(x_s1..x_sq), x_s(q+1)..x_sn) = 0,

so in particular d^2 = -l_2(theta, -).  Elements of weight >= weight_cap are
identified with zero: a structure stands for its quotient g / W_cap.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations, product
from math import factorial
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .exactlin import (CapabilityError, GradedMap, GradedSpace, InputError, PreconditionError, Vec,
                       fmt, frac, homology, koszul_sign, vadd_into, vscale)
from . import trees as T


def unshuffles(n: int, q: int):
    """Pairs (S, R) of increasing index tuples splitting range(n), |S| = q."""
    for S in combinations(range(n), q):
        R = tuple(i for i in range(n) if i not in S)
        yield S, R


class CurvedLinfty:
    """A weight-truncated curved L-infinity algebra.

    ``ops[n][args]`` holds l_n on a basis tuple sorted in basis order; the
    value on other orderings follows from the Koszul rule.  ``d`` maps basis
    names to vectors.
    """

    def __init__(self, space: GradedSpace, weights: Mapping[str, int], weight_cap: int,
                 d: Optional[Mapping[str, Mapping]] = None,
                 ops: Optional[Mapping[int, Mapping[tuple, Mapping]]] = None,
                 arity_cap: Optional[int] = None, name: str = ""):
        if weight_cap < 1:
            raise InputError("weight_cap must be >= 1")
        self.space = space
        self.name = name
        self.weight_cap = int(weight_cap)
        self.weights = {n: int(weights.get(n, 0)) for n in space.names()}
        self.index = {n: i for i, (n, _) in enumerate(space.basis)}
        self.deg = space.degree
        self.d: Dict[str, Vec] = {}
        for a, v in (d or {}).items():
            self._known(a)
            v = self.truncate(v)
            if v:
                self.d[a] = v
        self.ops: Dict[int, Dict[tuple, Vec]] = {}
        # entries contradicting graded symmetry; reported by check()
        self.symmetry_violations: List[Tuple[int, tuple, Vec]] = []
        for n, table in (ops or {}).items():
            n = int(n)
            if n == 1:
                raise InputError("l_1 is the pre-differential; give it as d")
            for args, v in table.items():
                args = tuple(args)
                if len(args) != n:
                    raise InputError(f"l_{n} entry with {len(args)} arguments")
                for a in args:
                    self._known(a)
                key, sign = self._sort(args)
                v = self.truncate(v)
                if sign == 0:
                    if v:
                        self.symmetry_violations.append((n, args, v))
                    continue
                v = vscale(v, sign)
                tab = self.ops.setdefault(n, {})
                if key in tab and tab[key] != v:
                    self.symmetry_violations.append((n, args, v))
                    continue
                if v:
                    tab[key] = v
        self.ops = {n: {k: v for k, v in tab.items() if v} for n, tab in self.ops.items()}
        top = max(self.ops, default=0)
        self.arity_cap = max(arity_cap or 0, top, 2)
        self._validate_degrees()

    # --- basics ---------------------------------------------------------------

    def _known(self, a):
        if a not in self.index:
            raise InputError(f"unknown basis element {a!r}")

    def _sort(self, args: Sequence[str]) -> Tuple[tuple, int]:
        order = sorted(range(len(args)), key=lambda i: self.index[args[i]])
        key = tuple(args[i] for i in order)
        sign = koszul_sign([i + 1 for i in order], [self.deg[a] for a in args])
        for x, y in zip(key, key[1:]):
            if x == y and self.deg[x] % 2:
                return key, 0
        return key, sign

    def _validate_degrees(self):
        for a, v in self.d.items():
            for b in v:
                if self.deg[b] != self.deg[a] - 1:
                    raise InputError(f"d({a}) has a term {b} of the wrong degree")
        for n, tab in self.ops.items():
            for args, v in tab.items():
                want = sum(self.deg[a] for a in args) - 1
                for b in v:
                    if self.deg[b] != want:
                        raise InputError(f"l_{n}{args} has a term {b} of the wrong degree")

    def truncate(self, v: Mapping) -> Vec:
        return {k: frac(c) for k, c in v.items() if c and self.weights[k] < self.weight_cap}

    def weight_of(self, v: Mapping) -> Optional[int]:
        ws = [self.weights[k] for k, c in v.items() if c]
        return min(ws) if ws else None

    def degree_of(self, v: Mapping) -> Optional[int]:
        return self.space.vector_degree(v)

    @property
    def theta(self) -> Vec:
        return dict(self.ops.get(0, {}).get((), {}))

    def is_curved(self) -> bool:
        return bool(self.theta)

    # --- operations --------------------------------------------------------

    def apply_d(self, v: Mapping) -> Vec:
        out: Vec = {}
        for a, c in v.items():
            if a in self.d:
                vadd_into(out, self.d[a], c)
        return out

    def l_basis(self, n: int, args: Sequence[str]) -> Vec:
        if n == 1:
            return dict(self.d.get(args[0], {}))
        key, sign = self._sort(args)
        if sign == 0:
            return {}
        v = self.ops.get(n, {}).get(key)
        if not v:
            return {}
        if sum(self.weights[a] for a in args) >= self.weight_cap:
            return {}
        return vscale(v, sign) if sign != 1 else dict(v)

    def l(self, n: int, *vecs: Mapping) -> Vec:
        """l_n on arbitrary vectors (multilinear extension)."""
        if len(vecs) != n:
            raise InputError(f"l_{n} takes {n} arguments")
        if n == 1:
            return self.apply_d(vecs[0])
        if n == 0:
            return self.theta
        if n not in self.ops:
            return {}
        out: Vec = {}
        for combo in product(*[list(v.items()) for v in vecs]):
            c = 1
            for _, x in combo:
                c *= x
            vadd_into(out, self.l_basis(n, [a for a, _ in combo]), c)
        return out

    def op_arities(self) -> List[int]:
        return sorted(n for n in self.ops if self.ops[n])

    # --- relations ------------------------------------------------------------

    def relation(self, args: Sequence[str]) -> Vec:
        """Left side of the n-th structure relation on basis elements."""
        n = len(args)
        degs = [self.deg[a] for a in args]
        out: Vec = {}
        for q in range(0, n + 1):
            p = n + 1 - q
            if p < 1 or (q != 1 and q not in self.ops) or (p != 1 and p not in self.ops):
                continue
            for S, R in unshuffles(n, q):
                eps = koszul_sign([i + 1 for i in S + R], degs)
                inner = self.l(q, *[{args[i]: Fraction(1)} for i in S])
                if not inner:
                    continue
                outer = self.l(p, inner, *[{args[i]: Fraction(1)} for i in R])
                vadd_into(out, outer, eps)
        return out

    def check(self, max_arity: Optional[int] = None) -> List[Tuple[int, tuple, Vec]]:
        """All failing (n, basis tuple, residual); empty list means pass."""
        failures = []
        arities = self.op_arities()
        top = max_arity if max_arity is not None else max(2 * max(arities + [1]) - 1, 1)
        names = self.space.names()
        for n in range(0, top + 1):
            for args in self._light_tuples(names, n):
                r = self.relation(args)
                if r:
                    failures.append((n, args, r))
        failures += list(self.symmetry_violations)
        failures += [(-1, (), w) for w in self.weight_violations()]
        return failures

    def _light_tuples(self, names, n):
        """Sorted n-tuples (with repetition) of total weight below the cap."""
        w = [self.weights[a] for a in names]
        tail_min = [min(w[j:]) for j in range(len(w))]

        def go(start, left, budget):
            if left == 0:
                yield ()
                return
            for j in range(start, len(names)):
                if tail_min[j] * left >= budget:
                    break
                if w[j] + tail_min[j] * (left - 1) >= budget:
                    continue
                for rest in go(j, left - 1, budget - w[j]):
                    yield (names[j],) + rest

        yield from go(0, n, self.weight_cap)

    def weight_violations(self) -> List[Vec]:
        bad = []
        for a, v in self.d.items():
            if any(self.weights[b] < self.weights[a] for b in v):
                bad.append({a: Fraction(1)})
        for n, tab in self.ops.items():
            for args, v in tab.items():
                w = sum(self.weights[a] for a in args) + 1
                if any(self.weights[b] < w for b in v):
                    bad.append({a: Fraction(1) for a in args})
        return bad

    # --- Maurer-Cartan -------------------------------------------------------

    def mc_residual(self, alpha: Mapping) -> Vec:
        alpha = self.truncate(alpha)
        deg = self.degree_of(alpha)
        if deg not in (None, 0):
            raise InputError("a Maurer-Cartan element has degree 0")
        out = self.apply_d(alpha)
        vadd_into(out, self.theta)
        for n in self.op_arities():
            if n < 2:
                continue
            vadd_into(out, self.l(n, *[alpha] * n), Fraction(1, factorial(n)))
        return self.truncate(out)

    def is_mc(self, alpha) -> bool:
        return not self.mc_residual(alpha)

    def twisted_apply(self, alpha: Mapping, x: Mapping) -> Vec:
        out = self.apply_d(x)
        for n in self.op_arities():
            if n < 2:
                continue
            vadd_into(out, self.l(n, *([alpha] * (n - 1)), x), Fraction(1, factorial(n - 1)))
        return self.truncate(out)

    def twisted_differential(self, alpha: Mapping, check: bool = True) -> GradedMap:
        if check:
            r = self.mc_residual(alpha)
            if r:
                raise PreconditionError("not a Maurer-Cartan element", witness=r)
        cols = {a: self.twisted_apply(alpha, {a: Fraction(1)}) for a in self.space.names()}
        return GradedMap.from_columns(self.space, self.space, -1, cols)

    def twisted_homology(self, alpha: Mapping, n: int):
        return homology(self.twisted_differential(alpha), n)

    def differential_map(self) -> GradedMap:
        return GradedMap.from_columns(self.space, self.space, -1, self.d)

    # --- trees ----------------------------------------------------------------

    def eval_tree(self, tree, labels: Sequence[Mapping]) -> Vec:
        """Evaluate a corked rooted tree with leaves (canonical preorder) labeled."""
        if len(labels) != T.arity(tree):
            raise InputError("label count differs from the arity")
        it = iter(labels)

        def go(t):
            if t == T.LEAF:
                return self.truncate(next(it))
            if t == T.CORK:
                return self.theta
            kids = [go(c) for c in T.children(t)]
            k = len(kids)
            if k > self.arity_cap:
                raise PreconditionError(f"no operation l_{k} within the arity cap")
            return self.l(k, *kids)

        return go(tree)

    def eval_series(self, series: Iterable[Tuple[Fraction, tuple, Sequence[Mapping]]]) -> Vec:
        out: Vec = {}
        for c, tree, labels in series:
            vadd_into(out, self.eval_tree(tree, labels), c)
        return out

    # --- serialization ------------------------------------------------------------

    def to_json(self):
        def vec(v):
            return [{"name": k, "coef": fmt(c)} for k, c in sorted(v.items(), key=lambda kv: self.index[kv[0]])]
        return {
            "space": self.space.to_json(),
            "weights": {n: self.weights[n] for n in self.space.names()},
            "weight_cap": self.weight_cap,
            "arity_cap": self.arity_cap,
            "d": GradedMap.from_columns(self.space, self.space, -1, self.d).to_json(),
            "ops": {str(n): [{"args": list(args), "value": vec(v)} for args, v in sorted(tab.items(), key=lambda kv: [self.index[a] for a in kv[0]])]
                    for n, tab in sorted(self.ops.items())},
        }

    @classmethod
    def from_json(cls, obj):
        try:
            space = GradedSpace.from_json(obj["space"])
            d = {}
            if obj.get("d"):
                dm = GradedMap.from_json(obj["d"], space)
                d = dm.cols
            ops = {}
            for n, entries in obj.get("ops", {}).items():
                tab = {}
                for e in entries:
                    v = {x["name"]: frac(x["coef"]) for x in e["value"]}
                    key = tuple(e["args"])
                    tab[key] = vadd_into(tab.get(key, {}), v)
                ops[int(n)] = tab
            return cls(space, obj.get("weights", {}), obj.get("weight_cap", 4), d, ops,
                       obj.get("arity_cap"))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad structure json: {e}") from e

    def vec_from_json(self, obj) -> Vec:
        """Accepts {"name": "p/q"} or [{"name", "coef"}]."""
        if isinstance(obj, dict):
            items = obj.items()
        else:
            items = [(x["name"], x["coef"]) for x in obj]
        out = {}
        for k, c in items:
            self._known(k)
            vadd_into(out, {k: frac(c)})
        return out


def convolution(C, s: CurvedLinfty, name: str = "") -> CurvedLinfty:
    """The curved L-infinity structure on hom(C, g) = C^* (x) g for C the
    cellular chains of a simplex (a ``transfer.UccCoalgebra``).

    Basis ``e@J`` stands for omega_J (x) e, of degree |e| - (|J| - 1) and weight
    weight(e).  Operations are sums over rooted trees tau of
    mu_tau (x) (tau evaluated in g), with the Koszul signs of moving forms past
    elements of g; l_0 = p(1) (x) theta and d = d_C (x) 1 + 1 (x) d_g.
    """
    from itertools import permutations
    from . import dupont as DP
    from . import transfer as TR

    n = C.n
    faces = C.faces
    lab = lambda J: "".join(map(str, J))
    names = {(e, J): f"{e}@{lab(J)}" for e in s.space.names() for J in faces}
    inv = {v: k for k, v in names.items()}
    basis = [(names[e, J], s.deg[e] - (len(J) - 1)) for (e, J) in names]
    weights = {names[e, J]: s.weights[e] for (e, J) in names}
    space = GradedSpace(basis)
    deg = space.degree

    d: Dict[str, Vec] = {}
    for (e, J), a in names.items():
        out: Vec = {}
        for I, c in DP.cochain_d(n, {J: Fraction(1)}).items():
            vadd_into(out, {names[e, I]: c})
        sign = (-1) ** ((len(J) - 1) % 2)
        for b, c in s.d.get(e, {}).items():
            vadd_into(out, {names[b, J]: sign * c})
        if out:
            d[a] = out

    ops: Dict[int, Dict[tuple, Vec]] = {}
    if s.theta:
        th: Vec = {}
        for I, c in TR.transferred_mu(n, T.CORK, []).items():
            for b, x in s.theta.items():
                vadd_into(th, {names[b, I]: c * x})
        ops[0] = {(): th}

    arities = [k for k in s.op_arities() if k >= 2]
    wmin = min(s.weights.values(), default=1)
    if arities and wmin == 0:
        raise CapabilityError("convolution needs every element of g in weight >= 1")
    tmp = CurvedLinfty(space, weights, s.weight_cap)
    all_names = space.names()
    if arities:
        for k in range(2, s.weight_cap):
            shapes = [t for w in range(0, s.weight_cap - k) for t in T.enumerate_rt(k, w)
                      if all(a in arities for a in T.vertex_arities(t))]
            if not shapes:
                continue
            for args in tmp._light_tuples(all_names, k):
                parts = [inv[a] for a in args]
                degs = [deg[a] for a in args]
                val: Vec = {}
                for tree in shapes:
                    if sum(weights[a] for a in args) + T.n_vertices(tree) >= s.weight_cap:
                        continue
                    aut = T.aut_order(tree)
                    for perm in set(permutations(range(k))):
                        eps = koszul_sign([i + 1 for i in perm], degs)
                        es = [parts[i][0] for i in perm]
                        Js = tuple(parts[i][1] for i in perm)
                        mu = TR.mu_on_faces(n, tree, Js)
                        if not mu:
                            continue
                        x = s.eval_tree(tree, [{e: Fraction(1)} for e in es])
                        if not x:
                            continue
                        sg = TR._leaf_sign(tree, [-(len(J) - 1) for J in Js], [s.deg[e] for e in es])
                        coef = Fraction(eps * sg, aut)
                        for I, c in mu:
                            for b, y in x.items():
                                vadd_into(val, {names[b, I]: coef * c * y})
                if val:
                    ops.setdefault(k, {})[args] = val
    return CurvedLinfty(space, weights, s.weight_cap, d, ops,
                        name=name or f"hom(C(Delta^{n}), {s.name})")


def render_vec(v: Mapping, order: Optional[Mapping[str, int]] = None) -> str:
    """Text rendering like ``x + y + 1/2 z``."""
    if not v:
        return "0"
    keys = sorted(v, key=(lambda k: (order[k], k)) if order else str)
    parts = []
    for k in keys:
        c = v[k]
        mag = abs(c)
        body = k if mag == 1 else f"{fmt(mag)} {k}"
        if not parts:
            parts.append(body if c > 0 else "-" + body)
        else:
            parts.append(("+ " if c > 0 else "- ") + body)
    return " ".join(parts)


def vec_json(v: Mapping, order=None):
    keys = sorted(v, key=(lambda k: (order[k], k)) if order else str)
    return [{"name": k, "coef": fmt(v[k])} for k in keys]
