"""dcbundle command-line entry point.

Exit codes: 0 success, 1 input or validation error, 2 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import yaml

from .. import conic_p2 as cp
from ..double_cover import group_law, make_good, validate_admissible, branch_decompose
from ..exact_arith import DistinguishedOpen, Mat2, ProjFunc, RatFunc
from ..p1_bundles import (
    AffineCocycle, P1TransitionData, split_p1, trivialize_affine, verify_factorization, verify_trivialization,
)
from . import serialize as ser
from .parser import LINE_VARS, PLANE_VARS, ParseError, parse_poly


class InputError(ValueError):
    """Malformed or inconsistent input document."""


# -- document decoding ---------------------------------------------------------------


def _rational(v, what="value") -> Fraction:
    if isinstance(v, bool) or isinstance(v, float):
        raise InputError(f"{what}: {v!r} is not an exact rational")
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, str):
        try:
            num, _, den = v.strip().partition("/")
            return Fraction(int(num), int(den) if den else 1)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{what}: {v!r} is not a rational p/q") from None
    raise InputError(f"{what}: expected a rational, got {type(v).__name__}")


def _rationals(v, n, what):
    if not isinstance(v, (list, tuple)) or len(v) != n:
        raise InputError(f"{what}: expected a list of {n} rationals")
    return tuple(_rational(c, what) for c in v)


def _poly(v, variables, what="polynomial"):
    if isinstance(v, int) and not isinstance(v, bool):
        v = str(v)
    if not isinstance(v, str):
        raise InputError(f"{what}: expected an expression string")
    try:
        return parse_poly(v, variables)
    except ParseError as e:
        raise InputError(f"{what}: {e}") from None


def _line_func(v, what="entry") -> RatFunc:
    if isinstance(v, dict):
        num = _poly(v.get("num"), LINE_VARS, what)
        den = _poly(v.get("den", "1"), LINE_VARS, what)
        if den.is_zero():
            raise InputError(f"{what}: zero denominator")
        return RatFunc(num, den)
    return RatFunc(_poly(v, LINE_VARS, what))


def _plane_func(v, what="entry") -> ProjFunc:
    if isinstance(v, dict):
        num = _poly(v.get("num"), PLANE_VARS, what)
        den = _poly(v.get("den", "1"), PLANE_VARS, what)
        if den.is_zero():
            raise InputError(f"{what}: zero denominator")
        return ProjFunc(num, den)
    return ProjFunc(_poly(v, PLANE_VARS, what))


def _matrix(v, what="matrix") -> Mat2:
    if not (isinstance(v, list) and len(v) == 2 and all(isinstance(r, list) and len(r) == 2 for r in v)):
        raise InputError(f"{what}: matrix must be 2x2")
    return Mat2(*(_line_func(e, what) for row in v for e in row))


def _check_header(doc: dict, expected: tuple):
    declared = doc.get("variables")
    if declared is not None and tuple(declared) != expected:
        raise InputError(f"declared variables {declared} do not match {list(expected)}")


def _cover(doc: dict) -> cp.ConicCover:
    if "conic" not in doc:
        return cp.ConicCover()
    return cp.ConicCover(_poly(doc["conic"], PLANE_VARS, "conic"))


def _pair(spec, what="pair"):
    """Built-in name ('conic', 'two-point') or {F, M, charts, p}."""
    if spec in (None, "conic", "standard"):
        return cp.standard_conic_pair(), "conic"
    if spec == "two-point":
        return cp.two_point_pair(), "two-point"
    if not isinstance(spec, dict):
        raise InputError(f"{what}: unknown pair {spec!r}")
    F = _poly(spec.get("F"), PLANE_VARS, f"{what}.F")
    M = spec.get("M")
    if not isinstance(M, list) or len(M) != 3:
        raise InputError(f"{what}.M: expected three forms [a0, a1, a2]")
    forms = [_poly(m, PLANE_VARS, f"{what}.M") for m in M]
    charts = spec.get("charts", [0, 1, 2])
    if not isinstance(charts, list) or not charts or any(c not in (0, 1, 2) for c in charts):
        raise InputError(f"{what}.charts: expected a nonempty list of chart indices 0..2")
    base = cp._plane_standard_rep(F, forms, charts)
    choices = {}
    for k, lst in (spec.get("p") or {}).items():
        choices[int(k)] = [_plane_func(p, f"{what}.p") for p in lst]
    good = make_good(base, choices)
    return good.relabel({lab: f"{lab[0]}.{lab[1]}" for lab in good.labels}), "custom"


def _exponents(doc: dict, args, count: int) -> list:
    if args.n is not None:
        n = [args.n]
    else:
        n = doc.get("n", [1] * count)
        if isinstance(n, int) and not isinstance(n, bool):
            n = [n]
    if not isinstance(n, list) or not all(isinstance(k, int) and not isinstance(k, bool) for k in n):
        raise InputError("n: expected an integer or a list of integers")
    if len(n) != count:
        raise InputError(f"n: expected {count} exponents, got {len(n)}")
    return n


# -- commands -------------------------------------------------------------------------


def cmd_split_p1(doc, args):
    _check_header(doc, LINE_VARS)
    G = _matrix(doc.get("matrix"))
    data = P1TransitionData(G)
    s = split_p1(data)
    if not verify_factorization(G, s):
        raise AssertionError("factorization check failed")
    return ser.splitting(s)


def _cocycle(doc) -> AffineCocycle:
    opens = doc.get("opens")
    if not isinstance(opens, list) or not opens:
        raise InputError("opens: expected a nonempty list of polynomials in x")
    Us = []
    for h in opens:
        p = _poly(h, LINE_VARS, "opens")
        if p.is_zero():
            raise InputError("opens: zero polynomial")
        Us.append(DistinguishedOpen.from_poly(p))
    if "g_to_0" in doc:
        gs = doc["g_to_0"]
        if not isinstance(gs, list):
            raise InputError("g_to_0: expected a list of matrices")
        return AffineCocycle.from_g_i0(Us, [_matrix(g, "g_to_0") for g in gs])
    trans = doc.get("transitions")
    if not isinstance(trans, list):
        raise InputError("expected 'g_to_0' or 'transitions'")
    m = len(Us)
    table = {(i, i): Mat2.identity() for i in range(m)}
    for t in trans:
        if not isinstance(t, dict):
            raise InputError("transitions: entries must be {i, j, matrix}")
        i, j = t.get("i"), t.get("j")
        if not (isinstance(i, int) and isinstance(j, int) and 0 <= i < m and 0 <= j < m):
            raise InputError(f"transitions: undefined chart id in {i!r}, {j!r}")
        table[i, j] = _matrix(t.get("matrix"), "transitions")
        if (j, i) not in table:
            table[j, i] = table[i, j].inverse()
    missing = [(i, j) for i in range(m) for j in range(m) if (i, j) not in table]
    if missing:
        raise InputError(f"transitions: missing entries {missing}")
    return AffineCocycle(Us, table)


def cmd_trivialize(doc, args):
    _check_header(doc, LINE_VARS)
    c = _cocycle(doc)
    bad = c.validate()
    if bad:
        raise InputError("; ".join(bad))
    A = trivialize_affine(c)
    bad = verify_trivialization(c, A)
    if bad:
        raise AssertionError("; ".join(bad))
    return {"frames": [ser.matrix(a) for a in A]}


def _pairs(doc):
    specs = doc.get("pairs")
    if specs is None:
        specs = [doc.get("pair")]
    if not isinstance(specs, list) or not specs:
        raise InputError("pairs: expected a nonempty list")
    return [_pair(s, f"pairs[{k}]") for k, s in enumerate(specs)]


def cmd_pushforward(doc, args):
    _check_header(doc, PLANE_VARS)
    pairs = _pairs(doc)
    n = _exponents(doc, args, len(pairs))
    rep = group_law([p for p, _ in pairs], n)
    return {"n": n, "representation": ser.pair_rep(rep)}


def _line(doc, cover) -> cp.LineInP2:
    form = doc.get("line")
    try:
        return cp.LineInP2.from_form(_rationals(form, 3, "line"))
    except InputError:
        raise
    except ValueError as e:
        raise InputError(f"line: {e}") from None


def cmd_restrict_line(doc, args):
    _check_header(doc, PLANE_VARS)
    pairs = _pairs(doc)
    kinds = {k for _, k in pairs}
    n = _exponents(doc, args, len(pairs))
    if kinds == {"two-point"}:
        L, tangent = cp.TWO_POINT_LINE, None
        lam = L
    else:
        cover = _cover(doc)
        L = _line(doc, cover)
        tangent = cover.is_tangent(L)
        lam = cover.to_normal_line(L) if kinds == {"conic"} else L
    reps = [p for p, _ in pairs]
    t_side = group_law([cp.restrict_rep(r, lam.P, lam.Q) for r in reps], n)
    y_side = group_law([cp.restrict_rep(r, lam.Q, lam.P) for r in reps], n)
    data, route = cp.line_transition(t_side, y_side)
    s = split_p1(data)
    return {
        "line": ser.line(L),
        "tangent": tangent,
        "n": n,
        "t_side": ser.pair_rep(t_side),
        "y_side": ser.pair_rep(y_side),
        "route": route,
        "transition": ser.matrix(data.G),
        "splitting": ser.splitting(s),
    }


DEFAULT_TANGENTS = ("1/2", "-1/2", "3")


def cmd_jumping_scan(doc, args):
    _check_header(doc, PLANE_VARS)
    cover = _cover(doc)
    n = _exponents(doc, args, 1)[0]
    lines = []
    for form in doc.get("lines", []):
        try:
            lines.append(cp.LineInP2.from_form(_rationals(form, 3, "lines")))
        except ValueError as e:
            raise InputError(f"lines: {e}") from None
    tangents = doc.get("tangent", list(DEFAULT_TANGENTS) if "lines" not in doc else [])
    params = [_rational(b, "tangent") for b in tangents]
    if any(b == 0 for b in params):
        raise InputError("tangent: parameter b must be nonzero")
    lines += cp.tangent_lines(cover, params)
    count = doc.get("random", 10 if "lines" not in doc else 0)
    if not isinstance(count, int) or count < 0:
        raise InputError("random: expected a nonnegative integer")
    lines += cp.random_lines(cover, count, args.seed)
    if not lines:
        raise InputError("no lines to scan")
    rows = cp.jumping_scan(cover, n, lines, jobs=args.jobs)
    mode = next(r.splitting for r in rows if not r.is_jumping)
    return {
        "n": n,
        "mode": list(mode),
        "rows": [
            {"line": ser.line(r.line), "e": list(r.splitting), "tangent": r.tangent, "jumping": r.is_jumping}
            for r in rows
        ],
    }


def _bidegree(doc, args):
    raw = args.bidegree if args.bidegree is not None else doc.get("bidegree", [0, 1])
    if isinstance(raw, str):
        try:
            raw = [int(v) for v in raw.split(",")]
        except ValueError:
            raise InputError(f"bidegree: {raw!r} is not 'k1,k2'") from None
    if not (isinstance(raw, list) and len(raw) == 2 and all(isinstance(v, int) for v in raw)):
        raise InputError("bidegree: expected two integers")
    if raw[0] < raw[1]:
        raise InputError("bidegree: need k1 >= k2")
    return tuple(raw)


def cmd_sections(doc, args):
    _check_header(doc, PLANE_VARS)
    bd = _bidegree(doc, args)
    D = args.degree_bound if args.degree_bound is not None else doc.get("degree_bound", sum(bd))
    if not isinstance(D, int) or D < 0:
        raise InputError("degree bound must be a nonnegative integer")
    basis = cp.global_sections(cp.ConicCover(), bd, D)
    return {
        "bidegree": list(bd),
        "degree_bound": D,
        "dimension": basis.dimension,
        "saturated": basis.saturated,
        "variables": ["x20", "x21"],
        "basis": [{"s1": ser.sparse_poly(s1), "s2": ser.sparse_poly(s2)} for s1, s2 in basis.basis],
    }


def cmd_branch(doc, args):
    _check_header(doc, PLANE_VARS)
    F = _poly(doc.get("F", "x0^2 + x1*x2"), PLANE_VARS, "F")
    f = _poly(doc.get("f"), PLANE_VARS, "f")
    if f.is_zero() or f.degree != 1:
        raise InputError("f must be a nonzero linear form")
    if F.is_zero() or F.degree % 2:
        raise InputError("F must be a nonzero form of even degree")
    res = branch_decompose(F, f)
    if res is None:
        return "none"
    a0, a1 = res
    if a0 * a0 + f * a1 != F:
        raise AssertionError("branch decomposition identity fails")
    return {"a0": ser.hom_poly(a0), "a1": ser.hom_poly(a1)}


def cmd_validate(doc, args):
    if "matrix" in doc:
        _check_header(doc, LINE_VARS)
        try:
            P1TransitionData(_matrix(doc["matrix"]))
            return {"kind": "p1-transition", "ok": True, "failures": []}
        except ValueError as e:
            if isinstance(e, InputError):
                raise
            return {"kind": "p1-transition", "ok": False, "failures": [str(e)]}
    if "opens" in doc:
        _check_header(doc, LINE_VARS)
        bad = _cocycle(doc).validate()
        return {"kind": "cocycle", "ok": not bad, "failures": bad}
    _check_header(doc, PLANE_VARS)
    pairs = _pairs(doc)
    bad = []
    for rep, _ in pairs:
        bad += validate_admissible(rep).failures
    return {"kind": "pair", "ok": not bad, "failures": bad}


COMMANDS = {
    "split-p1": cmd_split_p1,
    "trivialize-a1": cmd_trivialize,
    "pushforward": cmd_pushforward,
    "restrict-line": cmd_restrict_line,
    "jumping-scan": cmd_jumping_scan,
    "sections": cmd_sections,
    "branch-decompose": cmd_branch,
    "validate": cmd_validate,
}

NEEDS_INPUT = {"split-p1", "trivialize-a1", "branch-decompose", "validate"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dcbundle", description="Rank-2 bundle computations for double covers.")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        s = sub.add_parser(name)
        s.add_argument("--input", help="YAML or JSON input document ('-' for stdin)")
        s.add_argument("--output", help="write the result here instead of stdout")
        s.add_argument("--format", choices=("json", "text"), default="json")
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--degree-bound", type=int)
        s.add_argument("--n", type=int)
        s.add_argument("--bidegree")
    return p


def _load(args) -> dict:
    if args.input is None:
        if args.command in NEEDS_INPUT:
            raise InputError(f"{args.command} needs --input")
        return {}
    try:
        text = sys.stdin.read() if args.input == "-" else open(args.input, encoding="utf-8").read()
    except OSError as e:
        raise InputError(f"cannot read input: {e}") from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise InputError(f"input is not valid YAML/JSON: {e}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, dict):
        raise InputError("input document must be a mapping")
    return doc


def render(tree, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(tree, indent=2) + "\n"
    return yaml.safe_dump(tree, sort_keys=False, allow_unicode=True)


def run_command(argv) -> tuple[int, str]:
    """Run one subcommand; returns (exit code, rendered output or diagnostic)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return (0 if e.code == 0 else 1), ""
    try:
        if args.jobs < 1:
            raise InputError("--jobs must be positive")
        doc = _load(args)
        result = COMMANDS[args.command](doc, args)
    except (InputError, ParseError) as e:
        return 1, f"error: {e}"
    except (ValueError, ZeroDivisionError) as e:
        return 1, f"error: {e}"
    except (KeyError, TypeError, AttributeError) as e:
        # these come from malformed documents reaching the decoders
        return 1, f"error: malformed input ({type(e).__name__}: {e})"
    except Exception as e:  # invariant violations are bugs
        return 2, f"internal error: {type(e).__name__}: {e}"
    tree = {"command": args.command, "result": result}
    return 0, render(tree, args.format)


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        parsed = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse has already printed help or a usage message
        return 0 if e.code == 0 else 1
    code, out = run_command(argv)
    if code != 0:
        if out:
            print(out, file=sys.stderr)
        return code
    if parsed.output:
        with open(parsed.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
