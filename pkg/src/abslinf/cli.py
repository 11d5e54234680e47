"""Command-line front end.  Every verb parses, delegates and prints.

Exit codes: 0 success, 1 a check failed, 2 bad input, 3 unsupported
capability, 4 a mathematical precondition failed.
"""
from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Dict, List, Optional

from . import dupont as DP
from . import integration as IN
from . import transfer as TR
from . import trees as T
from .clinfty import CurvedLinfty, render_vec, vec_json
from .exactlin import CapabilityError, InputError, PreconditionError, fmt, frac
from .fixtures import FIXTURES, fixture

EXIT_FAIL, EXIT_INPUT, EXIT_CAPABILITY, EXIT_PRECONDITION = 1, 2, 3, 4


@dataclass(frozen=True)
class Config:
    weight_cap: int = 4
    arity_cap: int = 4
    mcn_max_n: int = 2
    poly_degree_bound: int = 6
    dual_reading: str = TR.TRANSPOSE

    def __post_init__(self):
        for f in ("weight_cap", "arity_cap", "mcn_max_n", "poly_degree_bound"):
            v = getattr(self, f)
            if not isinstance(v, int) or isinstance(v, bool) or v < (0 if f == "mcn_max_n" else 1):
                raise InputError(f"config: {f} must be a positive integer")
        if self.dual_reading not in (TR.TRANSPOSE, TR.INVERSE):
            raise InputError(f"config: dual_reading must be {TR.TRANSPOSE!r} or {TR.INVERSE!r}")

    @classmethod
    def load(cls, path: Optional[str] = None) -> "Config":
        path = path or os.environ.get("ABSL_CONFIG")
        if not path:
            return cls()
        try:
            with open(path) as fh:
                obj = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise InputError(f"cannot read config {path}: {e}") from e
        known = {f.name for f in fields(cls)}
        extra = set(obj) - known
        if extra:
            raise InputError(f"config: unknown keys {sorted(extra)}")
        return cls(**obj)


# --- input parsing ----------------------------------------------------------------------

def load_structure(args) -> CurvedLinfty:
    if getattr(args, "fixture", None):
        return fixture(args.fixture)
    if not args.file:
        raise InputError("give a structure file or --fixture NAME")
    try:
        with open(args.file) as fh:
            obj = json.load(fh)
    except OSError as e:
        raise InputError(f"cannot read {args.file}: {e}") from e
    return CurvedLinfty.from_json(obj)


_TERM = re.compile(r"^(\d+(?:/\d+)?)\s+(.+)$")


def parse_element(s: CurvedLinfty, text: str) -> Dict[str, Fraction]:
    """JSON ({"x": "1/2"} or [{"name", "coef"}]) or text such as ``x - 1/2 z``."""
    text = text.strip()
    if text[:1] in "{[":
        return s.vec_from_json(json.loads(text))
    if text == "0":
        return {}
    out: Dict[str, Fraction] = {}
    for sign, term in _split_terms(text):
        m = _TERM.match(term)
        coef, name = (frac(m.group(1)), m.group(2)) if m else (Fraction(1), term)
        if name not in s.space:
            raise InputError(f"unknown basis element {name!r}")
        out[name] = out.get(name, 0) + sign * coef
    return {k: c for k, c in out.items() if c}


def _split_terms(text):
    text = text.strip()
    sign = 1
    if text.startswith("-"):
        sign, text = -1, text[1:].strip()
    parts = re.split(r"\s+([+-])\s+", text)
    yield sign, parts[0].strip()
    for op, term in zip(parts[1::2], parts[2::2]):
        yield (1 if op == "+" else -1), term.strip()


def parse_face(key) -> tuple:
    if isinstance(key, (list, tuple)):
        return tuple(int(i) for i in key)
    key = str(key).strip()
    if key.startswith("["):
        return tuple(int(i) for i in json.loads(key))
    if not key.isdigit():
        raise InputError(f"bad face label {key!r}")
    return tuple(int(ch) for ch in key)


def parse_faces(s: CurvedLinfty, text: str) -> Dict[tuple, dict]:
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"faces must be JSON: {e}") from e
    obj = obj.get("assignment", obj)
    return {parse_face(k): (s.vec_from_json(v) if not isinstance(v, str) else parse_element(s, v))
            for k, v in obj.items()}


# --- output -------------------------------------------------------------------------------

def emit(args, obj, text: str):
    if args.format == "text":
        print(text)
    else:
        print(json.dumps(obj, indent=2))


def velem(s: CurvedLinfty, v) -> dict:
    return {"terms": vec_json(v, s.index), "text": render_vec(v, s.index)}


# --- verbs -------------------------------------------------------------------------------------

def cmd_trees(args, cfg: Config) -> int:
    if args.action == "enumerate":
        ar = cfg.arity_cap if args.arity is None else args.arity
        w = cfg.weight_cap if args.weight is None else args.weight
        ts = T.enumerate_rt(ar, w) if args.rooted else T.enumerate_crt(ar, w)
        rows = [{"tree": T.render(t), "aut": T.aut_order(t), "E": T.renorm_coeff(t)} for t in ts]
        emit(args, {"arity": ar, "weight": w, "count": len(rows), "trees": rows},
             "\n".join(f"{r['tree']}  |Aut|={r['aut']}  E={r['E']}" for r in rows) or "(none)")
        return 0
    t = T.parse(args.tree)
    val = T.aut_order(t) if args.action == "aut" else T.renorm_coeff(t)
    emit(args, {"tree": T.render(t), args.action: val}, str(val))
    return 0


def cmd_dupont(args, cfg: Config) -> int:
    n = args.n
    if args.action == "check":
        deg = args.degree if args.degree is not None else cfg.poly_degree_bound
        res = DP.check_identities(n, deg)
        held = sum(1 for f in res.values() if not f)
        summary = f"{held}/{len(res)} identities hold"
        emit(args, {"n": n, "degree": deg, "summary": summary,
                    "identities": {k: not v for k, v in res.items()}},
             summary + "".join(f"\nfails: {k}" for k, v in res.items() if v))
        return 0 if held == len(res) else EXIT_FAIL
    C = DP.Contraction(n)
    if args.op == "i":
        w = {parse_face(k): frac(v) for k, v in json.loads(args.value).items()}
        out = C.i(w)
    else:
        u = DP.parse_form(n, args.value)
        if args.op == "p":
            w = C.p(u)
            emit(args, {"n": n, "cochain": {"".join(map(str, I)): fmt(c) for I, c in sorted(w.items())}},
                 " + ".join(f"{fmt(c)} w{''.join(map(str, I))}" for I, c in sorted(w.items())) or "0")
            return 0
        out = C.h(u) if args.op == "h" else DP.dform(u)
    text = DP.render_form(out)
    emit(args, {"n": n, "form": text}, text)
    return 0


def _build(args, cfg: Config):
    cap = args.cap if args.cap is not None else cfg.weight_cap
    return TR.build_mcn(args.n, cap, reading=cfg.dual_reading, max_n=cfg.mcn_max_n)


def cmd_mcn(args, cfg: Config) -> int:
    M = _build(args, cfg)
    if args.action == "dump":
        obj = M.to_json()
        lines = [f"d a{r['generator'][1:]} = " + (" ".join(
            (("+ " if not x["coef"].startswith("-") else "- ") + (x["coef"].lstrip("-") + " " if x["coef"].lstrip("-") != "1" else "") + x["tree"])
            for x in r["d"]).lstrip("+ ") or "0") for r in obj["table"]]
        emit(args, obj, "\n".join(lines))
        return 0
    bad = TR.check_mcn_curvature(M)
    emit(args, {"n": M.n, "weight_cap": M.weight_cap, "ok": not bad,
                "failures": [g for g, _ in bad]},
         "D^2 + l_2(cork, -) = 0 on all generators" if not bad else
         "fails on " + ", ".join(g for g, _ in bad))
    return 0 if not bad else EXIT_FAIL


def cmd_structure(args, cfg: Config) -> int:
    s = load_structure(args)
    fails = s.check()
    rows = [{"arity": n, "args": list(a), "residual": vec_json(r, s.index)} for n, a, r in fails]
    emit(args, {"ok": not fails, "failures": rows},
         "structure relations hold" if not fails else
         "\n".join(f"l_{r['arity']}{tuple(r['args'])}: {render_vec(dict((x['name'], frac(x['coef'])) for x in r['residual']))}"
                   for r in rows))
    return 0 if not fails else EXIT_FAIL


def cmd_mc(args, cfg: Config) -> int:
    s = load_structure(args)
    r = s.mc_residual(parse_element(s, args.alpha))
    emit(args, {"ok": not r, "residual": velem(s, r)},
         "Maurer-Cartan" if not r else "residual " + render_vec(r, s.index))
    return 0 if not r else EXIT_FAIL


def cmd_gauge(args, cfg: Config) -> int:
    s = load_structure(args)
    alpha, lam = parse_element(s, args.alpha), parse_element(s, args.lam)
    gamma = IN.gauge_flow(s, alpha, lam)
    end = IN.poly_at(gamma, 1)
    if args.action == "act":
        emit(args, velem(s, end), render_vec(end, s.index))
        return 0
    path = {str(p): velem(s, v) for p, v in sorted(gamma.items())}
    emit(args, {"path": path, "end": velem(s, end)},
         "\n".join(f"t^{p}: {render_vec(v, s.index)}" for p, v in sorted(gamma.items()))
         + f"\ngamma(1) = {render_vec(end, s.index)}")
    return 0


def cmd_horn(args, cfg: Config) -> int:
    s = load_structure(args)
    faces = parse_faces(s, args.faces)
    y = parse_element(s, args.y) if args.y else None
    phi = IN.horn_fill(s, args.n, args.k, faces, y, max_n=cfg.mcn_max_n)
    emit(args, phi.to_json(),
         "\n".join(f"a{''.join(map(str, I))} -> {render_vec(v, s.index)}"
                   for I, v in sorted(phi.assignment.items()) if v))
    return 0


def cmd_bch(args, cfg: Config) -> int:
    pos = list(args.items)
    if not args.fixture:
        if len(pos) != 3:
            raise InputError("usage: bch (--fixture NAME | FILE) x y")
        args.file = pos.pop(0)
    if len(pos) != 2:
        raise InputError("bch needs two elements")
    s = load_structure(args)
    v = IN.bch(s, parse_element(s, pos[0]), parse_element(s, pos[1]))
    emit(args, velem(s, v), render_vec(v, s.index))
    return 0


def cmd_pi(args, cfg: Config) -> int:
    s = load_structure(args)
    dim, reps = IN.homotopy_group(s, parse_element(s, args.alpha), args.n)
    emit(args, {"n": args.n, "dim": dim, "basis": [velem(s, r) for r in reps]}, str(dim))
    return 0


def cmd_accept(args, cfg: Config) -> int:
    from .acceptance import CRITERIA
    rows = []
    for i, (name, fn) in enumerate(CRITERIA, start=1):
        if args.only and i not in args.only:
            continue
        ok, detail = fn()
        rows.append({"id": i, "name": name, "ok": ok, "detail": detail})
    emit(args, {"ok": all(r["ok"] for r in rows), "criteria": rows},
         "\n".join(f"[{'PASS' if r['ok'] else 'FAIL'}] {r['id']:2d}. {r['name']}: {r['detail']}" for r in rows))
    return 0 if all(r["ok"] for r in rows) else EXIT_FAIL


# --- argument parsing ---------------------------------------------------------------------

def _structure_args(p, positional=True):
    p.add_argument("--fixture", choices=sorted(FIXTURES))
    if positional:
        p.add_argument("--file", help="structure JSON")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--config", help="JSON config (default: $ABSL_CONFIG)")
    ap = argparse.ArgumentParser(prog="abslinf", description="exact curved L-infinity integration")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("trees")
    tsub = p.add_subparsers(dest="action", required=True)
    q = tsub.add_parser("enumerate", parents=[common])
    q.add_argument("--arity", type=int)
    q.add_argument("--weight", type=int)
    q.add_argument("--rooted", action="store_true", help="cork-free trees only")
    for name in ("aut", "coeff"):
        q = tsub.add_parser(name, parents=[common])
        q.add_argument("tree", help="e.g. '(| (* |))'")
    p.set_defaults(func=cmd_trees)

    p = sub.add_parser("dupont")
    dsub = p.add_subparsers(dest="action", required=True)
    q = dsub.add_parser("check", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--degree", type=int)
    q = dsub.add_parser("eval", parents=[common])
    q.add_argument("value", help="form text, or cochain JSON for --op i")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--op", choices=["i", "p", "h", "d"], default="h")
    p.set_defaults(func=cmd_dupont)

    p = sub.add_parser("mcn", parents=[common])
    p.add_argument("action", choices=["dump", "check"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--cap", type=int)
    p.set_defaults(func=cmd_mcn)

    p = sub.add_parser("structure", parents=[common])
    p.add_argument("action", choices=["check"])
    p.add_argument("file", nargs="?")
    _structure_args(p, False)
    p.set_defaults(func=cmd_structure)

    p = sub.add_parser("mc", parents=[common])
    p.add_argument("action", choices=["check"])
    p.add_argument("alpha")
    _structure_args(p)
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("gauge", parents=[common])
    p.add_argument("action", choices=["flow", "act"])
    p.add_argument("alpha")
    p.add_argument("lam")
    _structure_args(p)
    p.set_defaults(func=cmd_gauge)

    p = sub.add_parser("horn", parents=[common])
    p.add_argument("action", choices=["fill"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--faces", required=True, help="JSON {face: element} or a file")
    p.add_argument("--y")
    _structure_args(p)
    p.set_defaults(func=cmd_horn)

    p = sub.add_parser("bch", parents=[common])
    p.add_argument("items", nargs="+", help="[FILE] x y")
    p.add_argument("--fixture", choices=sorted(FIXTURES))
    p.set_defaults(func=cmd_bch, file=None)

    p = sub.add_parser("pi", parents=[common])
    p.add_argument("alpha")
    p.add_argument("--n", type=int, required=True)
    _structure_args(p)
    p.set_defaults(func=cmd_pi)

    p = sub.add_parser("accept", parents=[common])
    p.add_argument("--only", type=int, nargs="*", help="criterion numbers")
    p.set_defaults(func=cmd_accept)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = Config.load(args.config)
        return args.func(args, cfg)
    except (InputError, json.JSONDecodeError) as e:
        print(f"input error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except CapabilityError as e:
        print(f"unsupported: {e}", file=sys.stderr)
        return EXIT_CAPABILITY
    except PreconditionError as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return EXIT_PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
