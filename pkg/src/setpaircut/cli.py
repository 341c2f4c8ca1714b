"""Command-line front end.

JSON (or CSV for ``sweep``/``enumerate``) goes to standard output; human
summaries and timings go to standard error.  Exit codes: 0 success, 1 failed
check, 2 parse or validation error, 3 enumeration guard exceeded.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import functionals as fn
from .cuts import KIND_NAMES, CutProblem, pair_ratio_problem
from .graph import read_graph
from .kcut import kcut_discrete, kcut_FL, kcut_GL, kcut_ratio, parse_block_vector
from .lovasz import extension_properties_check, read_tabulated
from .relax import InfeasibleVectorError, ZeroDenominatorError, threshold_round, worker_count
from .setpair import GuardError, code_chunks, indicator, pair_masks, parse_setpair
from .submodular import (
    BUILTINS,
    builtin_function,
    check_nested_submodular,
    check_pair_submodular,
    check_partial_submodular,
    convexity_probe,
)

FUNCTIONAL_NAMES = ("I", "I+", "Ihat", "norm", "sup", "F1", "F2", "G1", "G2", "G3", "Gunion")
CHECKS = ("pair-submodular", "partial", "strict", "convexity", "properties", "nested")


def fmt(v: float) -> float:
    """Round to 10 significant digits for output."""
    return float(f"{float(v):.10g}")


def exact(v: float) -> str | None:
    """Small-denominator rational within 1e-9 of ``v`` (denominator <= 1000)."""
    q = Fraction(float(v)).limit_denominator(1000)
    if abs(float(q) - v) <= 1e-9:
        return str(q)
    return None


def value_fields(v: float, key: str = "value") -> dict:
    out = {key: fmt(v)}
    q = exact(v)
    if q is not None:
        out[key + "_exact"] = q
    return out


def emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def note(msg: str) -> None:
    print(msg, file=sys.stderr)


def read_text(arg: str) -> str:
    if os.path.isfile(arg):
        with open(arg) as fh:
            return fh.read()
    return arg


def read_vector(arg: str, n: int) -> np.ndarray:
    """A vector as text or file; a set-pair (``A={..};B={..}`` or JSON) becomes its indicator."""
    text = read_text(arg).strip()
    if text.startswith("A=") or text.startswith("{"):
        x = indicator(parse_setpair(text), n)
    else:
        x = fn.parse_vector(text)
    if x.size != n:
        raise ValueError(f"vector has {x.size} entries, graph has {n} vertices")
    return x


def _record(args, command, payload, started):
    if getattr(args, "record", None):
        rec = {"command": command, "parameters": {k: v for k, v in vars(args).items()
                                                  if k not in ("func", "record")},
               "results": payload, "wall_time": time.perf_counter() - started}
        with open(args.record, "w") as fh:
            json.dump(rec, fh, indent=2)


# ----------------------------------------------------------------- commands

def cmd_solve(args) -> int:
    started = time.perf_counter()
    g = read_graph(args.graph)
    if args.kind == "kcut":
        if args.k is None:
            raise ValueError("solve kcut needs --k")
        if args.method != "oracle":
            raise ValueError("kcut supports only --method oracle")
        value, parts, count = kcut_discrete(g, args.k, args.sense, args.nonempty)
        out = {"kind": "kcut", "k": args.k, "sense": args.sense, **value_fields(value),
               "witness": {"parts": [sorted(i + 1 for i in p) for p in parts]},
               "method": "oracle", "evaluations": count, "graph": g.digest()}
    else:
        p = CutProblem(args.kind, g)
        res = p.solve(args.method, args.restarts, args.seed, args.max_iters, args.tol,
                      nonempty=args.nonempty)
        out = {"kind": args.kind, "sense": p.sense, **value_fields(res.value),
               "witness": res.witness.to_json(), "method": args.method,
               "evaluations": res.evaluations, "graph": g.digest()}
        if args.method == "relax":
            out["params"] = {"restarts": args.restarts, "seed": args.seed,
                             "max_iters": args.max_iters, "tol": args.tol}
    emit(out)
    note(f"{out['kind']} {out['method']}: {out['value']} "
         f"({time.perf_counter() - started:.3f} s, {worker_count()} thread(s))")
    _record(args, "solve", out, started)
    return 0


def cmd_eval(args) -> int:
    started = time.perf_counter()
    g = read_graph(args.graph)
    name = args.name
    out = {"name": name}
    if name == "kcut":
        if args.k is None:
            raise ValueError("eval kcut needs --k")
        x = parse_block_vector(read_text(args.vector).replace(";", "\n"), g.n)
        out.update(value_fields(kcut_ratio(g, args.k, x)))
        out["FL"] = fmt(kcut_FL(g, args.k, x))
        out["GL"] = fmt(kcut_GL(g, args.k, x))
        out["l"] = x.shape[0]
    elif name in KIND_NAMES:
        x = read_vector(args.vector, g.n)
        p = CutProblem(name, g)
        out.update(value_fields(p.continuous_objective(x)))
        rp = pair_ratio_problem(p)
        pair = threshold_round(rp, x)
        out["rounded"] = pair.to_json()
        out.update(value_fields(rp.pair_ratio(pair), "rounded_value"))
    elif name in FUNCTIONAL_NAMES:
        x = read_vector(args.vector, g.n)
        funcs = {"I": fn.tv, "I+": fn.iplus, "Ihat": fn.ihat, "norm": fn.dnorm1,
                 "sup": lambda g_, x_: fn.sup_norm(x_),
                 "Gunion": lambda g_, x_: float(fn.UnionMinVolume(g_).extension(x_)[0])}
        f = funcs.get(name) or (lambda g_, x_: float(fn.table_extension_closed(g_, name, x_)))
        out.update(value_fields(f(g, x)))
    else:
        raise ValueError(f"unknown eval target {name!r}; expected a functional "
                         f"{FUNCTIONAL_NAMES}, a problem kind {KIND_NAMES} or 'kcut'")
    emit(out)
    note(f"eval {name}: {out['value']}")
    _record(args, "eval", out, started)
    return 0


def _load_function(args):
    g = read_graph(args.graph) if args.graph else None
    if args.function and args.builtin:
        raise ValueError("give either --function or --builtin, not both")
    if args.function:
        f = read_tabulated(read_text(args.function), name=os.path.basename(args.function))
    elif args.builtin:
        f = builtin_function(args.builtin, args.n, g)
    else:
        raise ValueError("check needs --function FILE or --builtin NAME")
    if args.n is not None and args.n != f.n:
        raise ValueError(f"--n {args.n} does not match the function's ground set size {f.n}")
    return f


def cmd_check(args) -> int:
    started = time.perf_counter()
    f = _load_function(args)
    out = {"check": args.check, "function": f.name, "n": f.n}
    if args.check == "properties":
        rep = extension_properties_check(f, trials=args.trials or 200, seed=args.seed)
        d = rep.as_dict()
        ok = max(d["homogeneity"], d["sign_shift"], d["additivity"], d["scaling"]) <= 1e-9
        if d["symmetric"] is not None:
            ok &= (d["evenness"] <= 1e-9) == d["symmetric"]
        out["report"] = {k: (fmt(v) if isinstance(v, float) else v) for k, v in d.items()}
        cert = None if ok else {"kind": "properties"}
    elif args.check == "convexity":
        cert = convexity_probe(f, trials=args.trials or 10_000, seed=args.seed)
    elif args.check == "partial":
        cert = check_partial_submodular(f)
    elif args.check == "nested":
        cert = check_nested_submodular(f, condition=args.condition, seed=args.seed)
    else:
        cert = check_pair_submodular(f, strict=args.check == "strict", seed=args.seed)
    out["result"] = "pass" if cert is None else "fail"
    if cert is not None and not isinstance(cert, dict):
        cert = cert.to_json()
    if cert is not None:
        out["certificate"] = cert
    emit(out)
    note(f"check {args.check} on {f.name}: {out['result']}")
    _record(args, "check", out, started)
    return 0 if cert is None else 1


def _sweep_rows(p: CutProblem, rp, X, offset):
    rows = []
    for i, x in enumerate(X):
        try:
            cont = p.continuous_objective(x)
            pair = threshold_round(rp, x)
        except (InfeasibleVectorError, ZeroDenominatorError):
            continue
        disc = rp.pair_ratio(pair)
        gap = (disc - cont) if p.sense == "max" else (cont - disc)
        rows.append(f"{offset + i},{cont:.17g},{disc:.17g},{gap:.17g}\n")
    return "".join(rows)


def cmd_sweep(args) -> int:
    g = read_graph(args.graph)
    p = CutProblem(args.problem, g)
    rp = pair_ratio_problem(p)
    X = np.random.default_rng(args.seed).normal(size=(args.samples, g.n))
    blocks = [(X[s:s + 256], s) for s in range(0, args.samples, 256)]
    nw = worker_count()
    if nw == 1:
        parts = [_sweep_rows(p, rp, b, s) for b, s in blocks]
    else:
        with ThreadPoolExecutor(max_workers=nw) as ex:
            parts = list(ex.map(lambda bs: _sweep_rows(p, rp, *bs), blocks))
    sys.stdout.write("sample,continuous,rounded,gap\n")
    for part in parts:
        sys.stdout.write(part)
    note(f"sweep {args.problem}: {args.samples} samples")
    return 0


def cmd_enumerate(args) -> int:
    g = read_graph(args.graph)
    p = CutProblem(args.problem, g)
    if g.n > 12:
        raise GuardError("enumerate lists every set-pair; limited to n <= 12")
    sys.stdout.write("code,a,b,value\n")
    for codes in code_chunks(3**g.n):
        A, B = pair_masks(codes, g.n)
        vals = p._rows(A, B) if not p.kind.two_cut else pair_ratio_problem(p).pair_ratio_rows(A, B)
        for c, a, b, v in zip(codes, A, B, vals):
            if np.isnan(v):
                continue
            la = " ".join(str(i + 1) for i in np.flatnonzero(a))
            lb = " ".join(str(i + 1) for i in np.flatnonzero(b))
            sys.stdout.write(f"{c},{la},{lb},{v:.17g}\n")
    return 0


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="setpaircut", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="optimise a cut problem")
    s.add_argument("kind", choices=KIND_NAMES + ("kcut",))
    s.add_argument("--graph", required=True)
    s.add_argument("--method", choices=("oracle", "relax"), default="oracle")
    s.add_argument("--restarts", type=int, default=50)
    s.add_argument("--seed", type=int, default=7)
    s.add_argument("--max-iters", type=int, default=200)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--k", type=int)
    s.add_argument("--sense", choices=("min", "max"), default="min")
    s.add_argument("--nonempty", action="store_true",
                   help="require every block of the partition to be nonempty")
    s.add_argument("--record", help="write a run record (with wall time) to this file")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate a functional or continuous objective")
    e.add_argument("name")
    e.add_argument("--graph", required=True)
    e.add_argument("--vector", required=True, help="vector text, file, or set-pair")
    e.add_argument("--k", type=int)
    e.add_argument("--record")
    e.set_defaults(func=cmd_eval)

    c = sub.add_parser("check", help="submodularity and extension checks")
    c.add_argument("check", choices=CHECKS)
    c.add_argument("--function")
    c.add_argument("--builtin", choices=BUILTINS)
    c.add_argument("--graph")
    c.add_argument("--n", type=int)
    c.add_argument("--trials", type=int)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--condition", choices=("plain", "corrected"), default="corrected")
    c.add_argument("--record")
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("sweep", help="CSV of continuous vs rounded values at random vectors")
    w.add_argument("--graph", required=True)
    w.add_argument("--problem", required=True, choices=KIND_NAMES)
    w.add_argument("--samples", type=int, default=1000)
    w.add_argument("--seed", type=int, default=0)
    w.set_defaults(func=cmd_sweep)

    n = sub.add_parser("enumerate", help="CSV of every feasible set-pair and its ratio")
    n.add_argument("--graph", required=True)
    n.add_argument("--problem", required=True, choices=KIND_NAMES)
    n.set_defaults(func=cmd_enumerate)
    return ap


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except GuardError as exc:
        note(f"error: {exc}")
        return 3
    except (ValueError, ArithmeticError, OSError, json.JSONDecodeError) as exc:
        note(f"error: {exc}")
        return 2


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
