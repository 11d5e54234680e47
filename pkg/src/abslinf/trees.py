"""Non-planar corked rooted trees.

A tree is a nested tuple in canonical form:

    LEAF = ('|',)            an input slot
    CORK = ('*',)            a vertex with no inputs
    ('v', (c1, c2, ...))     a vertex, children sorted, at least two of them

Text syntax: ``|``, ``*`` and ``(t1 t2 ...)``.  Weight is the number of
internal edges (edges joining two vertices, cork edges included), so the
corollas have weight 0 and ``(| *)`` has weight 1.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import factorial
from typing import List, Sequence, Tuple

from .exactlin import InputError

LEAF = ("|",)
CORK = ("*",)
Tree = tuple


def vertex(children: Sequence[Tree]) -> Tree:
    children = list(children)
    if len(children) == 1:
        raise InputError("a vertex needs at least two children (or none, i.e. a cork)")
    if not children:
        return CORK
    return ("v", tuple(sorted(children)))


def corolla(n: int) -> Tree:
    if n == 1:
        raise InputError("there is no 1-corolla")
    return vertex([LEAF] * n)


def is_leaf(t): return t == LEAF


def is_cork(t): return t == CORK


def children(t) -> Tuple[Tree, ...]:
    return t[1] if t[0] == "v" else ()


def canonical(t) -> Tree:
    if t in (LEAF, CORK):
        return t
    return vertex([canonical(c) for c in children(t)])


# --- text syntax -------------------------------------------------------------

def parse(text: str) -> Tree:
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise InputError(f"unexpected end of tree text: {text!r}")
        tok = tokens[pos]
        pos += 1
        if tok == "|":
            return LEAF
        if tok == "*":
            return CORK
        if tok == "(":
            kids = []
            while pos < len(tokens) and tokens[pos] != ")":
                kids.append(read())
            if pos >= len(tokens):
                raise InputError(f"unbalanced parentheses in {text!r}")
            pos += 1
            return vertex(kids)
        raise InputError(f"bad token {tok!r} in tree text")

    t = read()
    if pos != len(tokens):
        raise InputError(f"trailing input in tree text {text!r}")
    return t


def render(t: Tree) -> str:
    if t == LEAF:
        return "|"
    if t == CORK:
        return "*"
    return "(" + " ".join(render(c) for c in children(t)) + ")"


def to_json(t: Tree):
    if t == LEAF:
        return "|"
    if t == CORK:
        return "*"
    return [to_json(c) for c in children(t)]


def from_json(obj) -> Tree:
    if obj == "|":
        return LEAF
    if obj == "*":
        return CORK
    if isinstance(obj, list):
        return vertex([from_json(c) for c in obj])
    raise InputError(f"bad tree json {obj!r}")


# --- statistics ----------------------------------------------------------

@lru_cache(maxsize=None)
def arity(t: Tree) -> int:
    if t == LEAF:
        return 1
    return sum(arity(c) for c in children(t))


@lru_cache(maxsize=None)
def n_vertices(t: Tree) -> int:
    if t == LEAF:
        return 0
    if t == CORK:
        return 1
    return 1 + sum(n_vertices(c) for c in children(t))


def weight(t: Tree) -> int:
    return max(n_vertices(t) - 1, 0)


def vertex_arities(t: Tree) -> List[int]:
    if t == LEAF:
        return []
    out = [len(children(t))]
    for c in children(t):
        out += vertex_arities(c)
    return out


def has_cork(t: Tree) -> bool:
    return t == CORK or any(has_cork(c) for c in children(t))


@lru_cache(maxsize=None)
def aut_order(t: Tree) -> int:
    """|Aut(t)|: product of m! over repeated children times their own orders."""
    out = 1
    for c, m in Counter(children(t)).items():
        out *= factorial(m) * aut_order(c) ** m
    return out


@lru_cache(maxsize=None)
def renorm_coeff(t: Tree) -> int:
    """E(t): k! at every k-ary vertex (E(|) = 1, E(*) = 0! = 1)."""
    if t == LEAF:
        return 1
    out = factorial(len(children(t)))
    for c in children(t):
        out *= renorm_coeff(c)
    return out


# --- enumeration -------------------------------------------------------------

@lru_cache(maxsize=None)
def _trees(ar: int, nv: int) -> Tuple[Tree, ...]:
    """All canonical trees with given arity and number of vertices."""
    if nv == 0:
        return (LEAF,) if ar == 1 else ()
    if nv == 1 and ar == 0:
        return (CORK,)
    options = [(a, v) for a in range(ar + 1) for v in range(nv) if a + v >= 1]
    pool = sorted(c for a, v in options for c in _trees(a, v))
    out = []

    def extend(start, chosen, a_left, v_left):
        if a_left == 0 and v_left == 0:
            if len(chosen) >= 2:
                out.append(("v", tuple(chosen)))
            return
        for j in range(start, len(pool)):
            c = pool[j]
            ca, cv = arity(c), n_vertices(c)
            if ca <= a_left and cv <= v_left:
                extend(j, chosen + [c], a_left - ca, v_left - cv)

    extend(0, [], ar, nv - 1)
    return tuple(sorted(set(out)))


def enumerate_crt(ar: int, w: int) -> List[Tree]:
    """All corked rooted trees of arity ``ar`` and weight ``w`` (internal edges)."""
    if ar < 0 or w < 0:
        raise InputError("arity and weight must be non-negative")
    found = set(_trees(ar, w + 1))
    if w == 0 and ar == 1:
        found.add(LEAF)
    return sorted(found, key=lambda t: (n_vertices(t), render(t)))


def enumerate_rt(ar: int, w: int) -> List[Tree]:
    """Cork-free trees only."""
    return [t for t in enumerate_crt(ar, w) if not has_cork(t)]


# --- planar views, grafting, edges ------------------------------------------

def leaf_paths(t: Tree, prefix=()) -> List[tuple]:
    """Paths (child indices) to the leaves, in canonical preorder."""
    if t == LEAF:
        return [prefix]
    out = []
    for i, c in enumerate(children(t)):
        out += leaf_paths(c, prefix + (i,))
    return out


def graft(t: Tree, subtrees: Sequence[Tree]) -> Tree:
    """Replace the leaves of t (canonical preorder) by the given trees."""
    if len(subtrees) != arity(t):
        raise InputError(f"graft: tree has arity {arity(t)}, got {len(subtrees)} subtrees")
    it = iter(subtrees)

    def go(s):
        if s == LEAF:
            return next(it)
        if s == CORK:
            return CORK
        return vertex([go(c) for c in children(s)])

    return go(t)


def subtree(t: Tree, path) -> Tree:
    for i in path:
        t = children(t)[i]
    return t


def _replace(t: Tree, path, new) -> Tree | None:
    if not path:
        return new
    kids = list(children(t))
    r = _replace(kids[path[0]], path[1:], new)
    if r is None:
        del kids[path[0]]
    else:
        kids[path[0]] = r
    if len(kids) == 1:
        return kids[0]
    return vertex(kids)


def internal_edges(t: Tree) -> List[tuple]:
    """Internal edges, named by the path to their lower vertex."""
    out = []

    def go(s, prefix):
        for i, c in enumerate(children(s)):
            if c != LEAF:
                out.append(prefix + (i,))
                go(c, prefix + (i,))

    go(t, ())
    return out


def split_edges(t: Tree) -> List[Tuple[tuple, Tree, Tree]]:
    """For each internal edge e: (e, upper tree with a leaf at the cut, lower tree)."""
    return [(e, _replace(t, e, LEAF), subtree(t, e)) for e in internal_edges(t)]


def contract_edge(t: Tree, e) -> Tree:
    """Merge the lower vertex of e into its parent.

    Contracting a cork edge removes the cork; a parent left with one child is
    elided (identified with that child).
    """
    if tuple(e) not in internal_edges(t):
        raise InputError(f"{e} is not an internal edge of {render(t)}")
    e = tuple(e)
    parent_path, i = e[:-1], e[-1]
    parent = subtree(t, parent_path)
    kids = list(children(parent))
    lower = kids.pop(i)
    kids += list(children(lower))
    if len(kids) == 1:
        merged = kids[0]
    else:
        merged = vertex(kids)
    return _replace(t, parent_path, merged)
