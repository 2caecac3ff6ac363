"""Command-line front end.

    equivar classify --m 3 --p 1 --q 0 --k 1 --l 2
    equivar table --m 3 --p 0..1 --k 0..2 --format markdown
    equivar verify dstar --m 3 --p 2 --k 1
    equivar properties --seed 0

Integer options accept a single value, a range ``a..b`` or a list
``a,b,c``.  ``--config FILE`` reads ``key = value`` lines with the same
names as the long options; options given on the command line win.

Exit codes: 0 success, 1 failed check (unstabilized cell, table mismatch,
non-zero residual), 2 usage error.
"""

import argparse
import configparser
import json
import sys

from .canonical import OPERATORS, operator_shape
from .classify import check_shape
from .properties import check_operator, run_all
from .symbols import lie_op, lie_symbolic
from .tables import (
    expected_dimension,
    grid,
    natural_l,
    render,
    solve_cells,
    table_rows,
)


class UsageError(Exception):
    pass


def parse_range(text):
    """``"3"``, ``"0..2"`` or ``"0,1,3"`` -> sorted list of ints."""
    text = str(text).strip()
    out = set()
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                a, b = part.split("..")
                a, b = int(a), int(b)
                if b < a:
                    raise UsageError(f"empty range {part!r}")
                out.update(range(a, b + 1))
            else:
                out.add(int(part))
    except ValueError:
        raise UsageError(f"not an integer range: {text!r}") from None
    if not out:
        raise UsageError("empty range")
    return sorted(out)


DEFAULTS = {
    "m": "3", "p": "0..1", "q": None, "q_offsets": "-2,-1,0,1", "k": "0..2", "l": "natural",
    "path": "direct", "R": None, "xdeg": "0", "g": "2", "format": None, "seed": "0",
    "n": "20", "out": None,
}

KEY_ALIASES = {"x_deg": "xdeg", "q-offsets": "q_offsets", "r": "R"}


def read_config(path):
    parser = configparser.ConfigParser()
    parser.optionxform = str
    try:
        with open(path) as fh:
            parser.read_string("[run]\n" + fh.read())
    except (OSError, configparser.Error) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    out = {}
    for key, val in parser["run"].items():
        key = KEY_ALIASES.get(key, key)
        if key not in DEFAULTS:
            raise UsageError(f"unknown config key {key!r}")
        out[key] = val.strip()
    return out


def settings(args):
    merged = dict(DEFAULTS)
    if getattr(args, "config", None):
        merged.update(read_config(args.config))
    for key in DEFAULTS:
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    return merged


def _int(val, name):
    try:
        return int(val)
    except (TypeError, ValueError):
        raise UsageError(f"--{name} expects an integer, got {val!r}") from None


def _opt_int(val, name):
    return None if val is None else _int(val, name)


def _cells(s, strict):
    ms, ps, ks = parse_range(s["m"]), parse_range(s["p"]), parse_range(s["k"])
    l_rule = s["l"]
    if l_rule != "natural":
        l_rule = _int(l_rule, "l")
        if l_rule < 0:
            raise UsageError("--l must be non-negative")
    if s["q"] is None:
        offsets = parse_range_signed(s["q_offsets"])
        cells = grid(ms, ps, offsets, ks, l_rule)
    else:
        cells = []
        for m in ms:
            for p in ps:
                for q in parse_range(s["q"]):
                    if p > m or q > m:
                        if strict:
                            raise UsageError(f"form degrees p={p}, q={q} exceed the dimension m={m}")
                        continue
                    for k in ks:
                        l = natural_l(p, q, k) if l_rule == "natural" else l_rule
                        if l is None or l < 0:
                            if strict:
                                raise UsageError(f"no natural target order for p={p}, q={q}, k={k}; pass --l")
                            continue
                        try:
                            check_shape(m, p, q, k, l)
                        except ValueError as exc:
                            if strict:
                                raise UsageError(str(exc)) from None
                            continue
                        cells.append((m, p, q, k, l))
    if not cells:
        raise UsageError("the parameter ranges contain no valid cell")
    return cells


def parse_range_signed(text):
    out = set()
    for part in str(text).split(","):
        try:
            out.add(int(part.strip()))
        except ValueError:
            raise UsageError(f"not an integer list: {text!r}") from None
    return sorted(out)


def _bounds(s):
    path = s["path"]
    if path not in ("direct", "ansatz", "both"):
        raise UsageError(f"--path must be direct, ansatz or both, got {path!r}")
    R = _opt_int(s["R"], "R")
    xdeg = _int(s["xdeg"], "xdeg")
    g = _int(s["g"], "g")
    if (R is not None and R < 0) or xdeg < 0 or g < 0:
        raise UsageError("bounds must be non-negative")
    return path, R, xdeg, g


def _emit(text, s):
    if s["out"]:
        with open(s["out"], "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classify(args):
    s = settings(args)
    cells = _cells(s, strict=True)
    path, R, xdeg, g = _bounds(s)
    fmt = s["format"] or "json"
    results = [r for rs in solve_cells(cells, path, R, xdeg, g) for r in rs]
    if fmt == "json":
        objs = [r.to_json() for r in results]
        payload = objs[0] if len(objs) == 1 else objs
        text = json.dumps(payload, sort_keys=True, indent=1) + "\n"
    else:
        rows = []
        for r in results:
            rows.append({
                "m": r.m, "p": r.p, "q": r.q, "k": r.k, "l": r.l,
                "direct": r.dimension if r.path == "direct" else None,
                "ansatz": r.dimension if r.path == "ansatz" else None,
                "expected": expected_dimension(r.m, r.p, r.q, r.k, r.l),
                "status": "borderline" if r.borderline else r.path,
                "stabilized": r.stabilized,
            })
        text = render(rows, fmt)
    _emit(text, s)
    return 0 if all(r.stabilized for r in results) else 1


def cmd_table(args):
    s = settings(args)
    cells = _cells(s, strict=False)
    path, R, xdeg, g = _bounds(s)
    rows = table_rows(cells, path, R, xdeg, g)
    _emit(render(rows, s["format"] or "markdown"), s)
    return 1 if any(r["status"] == "MISMATCH" for r in rows) else 0


def cmd_verify(args):
    s = settings(args)
    name = args.operator
    if name not in OPERATORS:
        raise UsageError(f"unknown operator {name!r}; choose from {', '.join(sorted(OPERATORS))}")
    m = _int(s["m"], "m")
    p = _int(args.p if args.p is not None else 0, "p")
    k = _int(args.k if args.k is not None else 1, "k")
    try:
        (p_in, k_in), _ = operator_shape(name, m, p, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    field_degree = _int(args.field_degree, "field-degree")
    n = _int(s["n"], "n")
    seed = _int(s["seed"], "seed")
    lie = lie_op if args.lie == "op" else lie_symbolic
    rep = check_operator(name, m=m, n=n, field_degree=field_degree, seed=seed, lie=lie,
                         source=(p_in, k_in))
    fmt = s["format"] or "markdown"
    if fmt == "json":
        text = json.dumps({"operator": name, "m": m, "p": p_in, "k": k_in, "checked": rep.total,
                           "failures": len(rep.failures), "ok": rep.ok}, sort_keys=True) + "\n"
    else:
        text = rep.line() + "\n"
    _emit(text, s)
    return 0 if rep.ok else 1


def cmd_properties(args):
    s = settings(args)
    reps = run_all(seed=_int(s["seed"], "seed"), n=max(_int(args.n or 50, "n"), 1))
    fmt = s["format"] or "markdown"
    if fmt == "json":
        text = json.dumps([{"check": r.name, "passed": r.passed, "total": r.total, "ok": r.ok} for r in reps],
                          sort_keys=True, indent=1) + "\n"
    else:
        text = "".join(r.line() + "\n" for r in reps)
    _emit(text, s)
    return 0 if all(r.ok for r in reps) else 1


def build_parser():
    parser = argparse.ArgumentParser(prog="equivar", description="Classify equivariant maps between modules of differential operators on forms.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, grid_opts=True):
        sp.add_argument("--config", help="key = value file mirroring the long options")
        sp.add_argument("--m", help="dimension (value, a..b or list)")
        if grid_opts:
            sp.add_argument("--p", help="source form degree")
            sp.add_argument("--q", help="target form degree (default: offsets from p)")
            sp.add_argument("--q-offsets", dest="q_offsets", help="target offsets q - p (default -2,-1,0,1)")
            sp.add_argument("--k", help="source order")
            sp.add_argument("--l", help="target order or 'natural' for the natural pairing")
            sp.add_argument("--path", choices=["direct", "ansatz", "both"])
            sp.add_argument("--R", help="bound on the number of derivatives of the argument")
            sp.add_argument("--xdeg", help="coefficient degree bound of candidates")
            sp.add_argument("--g", help="degree of the generating vector fields")
        sp.add_argument("--format", choices=["json", "csv", "markdown"])
        sp.add_argument("--seed")
        sp.add_argument("--out", help="write output to FILE")

    sp = sub.add_parser("classify", help="dimension and basis of each cell")
    common(sp)
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("table", help="dimension table against the closed-form values")
    common(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("verify", help="exact residual check of a named operator")
    sp.add_argument("operator", help=", ".join(sorted(OPERATORS)))
    common(sp, grid_opts=False)
    sp.add_argument("--p")
    sp.add_argument("--k")
    sp.add_argument("--n", help="number of random operators (default 20)")
    sp.add_argument("--field-degree", dest="field_degree", default="3")
    sp.add_argument("--lie", choices=["symbolic", "op"], default="symbolic")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("properties", help="run the randomized identity checks")
    common(sp, grid_opts=False)
    sp.add_argument("--n", help="instances per check (default 50)")
    sp.set_defaults(func=cmd_properties)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"equivar: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
