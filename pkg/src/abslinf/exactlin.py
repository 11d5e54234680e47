"""Exact rational graded linear algebra.

Vectors are sparse dicts ``{basis name: Fraction}``.  Spaces carry a finite
named basis with homological degrees, maps are sparse matrices of a fixed
degree.  Everything is exact over Q.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

Vec = Dict[str, Fraction]


class InputError(ValueError):
    """Malformed arguments (exit code 2 at the CLI)."""


class CapabilityError(RuntimeError):
    """Request outside the supported range (exit code 3 at the CLI)."""


class PreconditionError(ArithmeticError):
    """A mathematical precondition failed (exit code 4 at the CLI)."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotADifferential(PreconditionError):
    pass


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


def fmt(q: Fraction) -> str:
    q = frac(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --- sparse vectors -------------------------------------------------------

def vadd(u: Mapping, v: Mapping, c=1) -> dict:
    out = dict(u)
    vadd_into(out, v, c)
    return out


def vadd_into(out: dict, v: Mapping, c=1) -> dict:
    for k, x in v.items():
        y = out.get(k, 0) + c * x
        if y:
            out[k] = y
        else:
            out.pop(k, None)
    return out


def vscale(v: Mapping, c) -> dict:
    if not c:
        return {}
    return {k: c * x for k, x in v.items()}


def vclean(v: Mapping) -> dict:
    return {k: frac(x) for k, x in v.items() if x}


# --- Koszul signs -----------------------------------------------------------

def koszul_sign(permutation: Sequence[int], degrees: Sequence[int]) -> int:
    """Sign picked up when graded factors x_1..x_n are reordered.

    The result is x_{p(1)} ... x_{p(n)} = sign * x_1 ... x_n read as moving the
    factors into the new order; ``permutation`` is 1-based.  Only the parity of
    the degrees matters: each inversion swaps two factors.
    """
    n = len(permutation)
    if len(degrees) != n:
        raise InputError("permutation and degrees have different lengths")
    if sorted(permutation) != list(range(1, n + 1)):
        raise InputError(f"not a permutation of 1..{n}: {list(permutation)}")
    s = 0
    for i in range(n):
        for j in range(i + 1, n):
            a, b = permutation[i], permutation[j]
            if a > b:
                s += degrees[a - 1] * degrees[b - 1]
    return -1 if s % 2 else 1


def sort_with_sign(items: Sequence, degrees: Sequence[int], key=None) -> Tuple[list, int]:
    """Stable sort of graded factors returning (sorted list, Koszul sign)."""
    key = key or (lambda x: x)
    order = sorted(range(len(items)), key=lambda i: key(items[i]))
    sign = koszul_sign([i + 1 for i in order], degrees)
    return [items[i] for i in order], sign


# --- graded spaces and maps ---------------------------------------------

class GradedSpace:
    """Finite graded space with a named basis ordered by (degree, name)."""

    def __init__(self, basis: Iterable[Tuple[str, int]]):
        pairs = [(str(n), int(d)) for n, d in basis]
        names = [n for n, _ in pairs]
        if len(set(names)) != len(names):
            raise InputError("basis names must be unique")
        self.basis: List[Tuple[str, int]] = sorted(pairs, key=lambda p: (p[1], p[0]))
        self.degree: Dict[str, int] = dict(pairs)

    def names(self, degree=None) -> List[str]:
        return [n for n, d in self.basis if degree is None or d == degree]

    def dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for _, d in self.basis:
            out[d] = out.get(d, 0) + 1
        return out

    def degrees(self) -> List[int]:
        return sorted(self.dims())

    def __contains__(self, name) -> bool:
        return name in self.degree

    def __len__(self):
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self.basis == other.basis

    def __hash__(self):
        return hash(tuple(self.basis))

    def vector_degree(self, v: Mapping) -> int | None:
        degs = {self.degree[k] for k, x in v.items() if x}
        if len(degs) > 1:
            raise InputError("inhomogeneous vector")
        return degs.pop() if degs else None

    def to_json(self):
        return {"basis": [{"name": n, "degree": d} for n, d in self.basis]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls((b["name"], b["degree"]) for b in obj["basis"])
        except (KeyError, TypeError) as e:
            raise InputError(f"bad GradedSpace json: {e}") from e


class GradedMap:
    """Sparse graded linear map; ``cols[name]`` is the image of a basis vector."""

    def __init__(self, source: GradedSpace, target: GradedSpace, degree: int,
                 entries: Iterable[Tuple[str, str, Fraction]] = ()):
        self.source, self.target, self.degree = source, target, int(degree)
        self.cols: Dict[str, Vec] = {}
        for a, b, c in entries:
            if a not in source or b not in target:
                raise InputError(f"unknown basis element in entry {a} -> {b}")
            if target.degree[b] != source.degree[a] + self.degree:
                raise InputError(f"entry {a} -> {b} does not have degree {self.degree}")
            vadd_into(self.cols.setdefault(a, {}), {b: frac(c)})
        self.cols = {a: v for a, v in self.cols.items() if v}

    @classmethod
    def from_columns(cls, source, target, degree, cols: Mapping[str, Mapping]):
        return cls(source, target, degree,
                   [(a, b, c) for a, v in cols.items() for b, c in v.items() if c])

    @classmethod
    def identity(cls, space):
        return cls(space, space, 0, [(n, n, 1) for n, _ in space.basis])

    @classmethod
    def zero(cls, source, target, degree=0):
        return cls(source, target, degree)

    def entries(self):
        for a in self.source.names():
            for b in self.target.names():
                c = self.cols.get(a, {}).get(b)
                if c:
                    yield a, b, c

    def __call__(self, v: Mapping) -> Vec:
        out: Vec = {}
        for a, x in v.items():
            if a in self.cols:
                vadd_into(out, self.cols[a], x)
        return out

    def __eq__(self, other):
        return (isinstance(other, GradedMap) and self.source == other.source
                and self.target == other.target and self.degree == other.degree
                and self.cols == other.cols)

    def is_zero(self):
        return not self.cols

    def block(self, p: int) -> Tuple[List[str], List[str], List[List[Fraction]]]:
        """Dense block from degree p to degree p + self.degree."""
        rows = self.target.names(p + self.degree)
        cols = self.source.names(p)
        mat = [[self.cols.get(a, {}).get(b, Fraction(0)) for a in cols] for b in rows]
        return rows, cols, mat

    def to_json(self):
        return {"degree": self.degree,
                "entries": [{"from": a, "to": b, "coef": fmt(c)} for a, b, c in self.entries()]}

    @classmethod
    def from_json(cls, obj, source, target=None):
        target = target or source
        try:
            return cls(source, target, obj["degree"],
                       [(e["from"], e["to"], frac(e["coef"])) for e in obj.get("entries", [])])
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as e:
            raise InputError(f"bad GradedMap json: {e}") from e


def compose(f: GradedMap, g: GradedMap) -> GradedMap:
    """f after g."""
    if g.target != f.source:
        raise InputError("compose: g.target != f.source")
    cols = {a: f(v) for a, v in g.cols.items()}
    return GradedMap.from_columns(g.source, f.target, f.degree + g.degree, cols)


def add_maps(f: GradedMap, g: GradedMap, c=1) -> GradedMap:
    if (f.source, f.target, f.degree) != (g.source, g.target, g.degree):
        raise InputError("add_maps: incompatible maps")
    cols = {a: dict(v) for a, v in f.cols.items()}
    for a, v in g.cols.items():
        vadd_into(cols.setdefault(a, {}), v, c)
    return GradedMap.from_columns(f.source, f.target, f.degree, cols)


# --- Gaussian elimination ---------------------------------------------------

def rref(rows: List[List[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    m = [list(map(frac, r)) for r in rows]
    pivots: List[int] = []
    if not m:
        return m, pivots
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(mat: List[List[Fraction]]) -> int:
    return len(rref(mat)[1])


def kernel(mat: List[List[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of the null space of a (rows x ncols) matrix."""
    red, pivots = rref(mat) if mat else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def solve(mat: List[List[Fraction]], rhs: List[Fraction]):
    """One solution of mat x = rhs, or None."""
    if not mat:
        return None if any(rhs) else []
    ncols = len(mat[0])
    aug = [list(r) + [frac(b)] for r, b in zip(mat, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return x


def homology(d: GradedMap, degree: int) -> Tuple[int, List[Vec]]:
    """dim H_degree of (V, d) and representatives of a basis.

    d must have degree -1 and square to zero; a failure raises
    NotADifferential with a witness basis vector.
    """
    if d.source != d.target or d.degree != -1:
        raise InputError("homology needs an endomorphism of degree -1")
    for a in d.source.names():
        dd = d(d({a: Fraction(1)}))
        if dd:
            raise NotADifferential("not a differential: d^2 != 0", witness={a: Fraction(1)})
    space = d.source
    _, cols, dn = d.block(degree)
    ker = kernel(dn, len(cols)) if dn else [
        [Fraction(int(i == j)) for j in range(len(cols))] for i in range(len(cols))]
    _, _, dn1 = d.block(degree + 1)
    # columns of d_{n+1} are image vectors in degree n
    image = [list(col) for col in zip(*dn1)] if dn1 and dn1[0] else []
    img_red, _ = rref(image) if image else ([], [])
    r = len(img_red)
    reps: List[Vec] = []
    span = [list(v) for v in img_red]
    for v in ker:
        trial = span + [v]
        if rank(trial) > len(span):
            span.append(v)
            reps.append({cols[i]: x for i, x in enumerate(v) if x})
    dim = len(ker) - r
    assert dim == len(reps)
    assert all(n in space for rep in reps for n in rep)
    return dim, reps
