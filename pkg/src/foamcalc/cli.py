"""Command-line front end.

Every computing subcommand reads a document (a file path or `-` for stdin),
resolves a named item, and prints the result as JSON (default) or text via
`--output`.  `verify-z4` and `selftest` are report commands and default to
text.  Exit codes: 0 success, 1 domain errors (an error object is printed),
2 parse errors.  `--precision` (or the env var FOAMCALC_PRECISION) caps the
declared enclosure digits; `--euclid-bound` caps the subtractive reduction.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import acceptance
from .decorated import (
    AbelianGroupSpec,
    flip_reduce,
    trace_from_json,
    trace_to_json,
    validate_trace,
)
from .decorated import gamma as gamma_fn
from .dsl import (
    Document,
    parse_document,
    parse_weight,
    print_document,
    weight_to_text,
)
from .errors import DslSemanticError, FoamError
from .exterior import WedgeValue
from .foamdiag import FoamDiagram, iet_closure, nu, zerofoam_class
from .iet import Iet, iet_apply, iet_compose, saf
from .planar import (
    DEFAULT_EUCLID_BOUND,
    BracketSum,
    PlanarFoam,
    bracket_simplify,
    bracket_sum_make_positive,
    foam_make_positive,
    planar_classify,
    classify_bracket,
    theta,
    tripod_decompose,
    verify_z4,
)
from .weights import Weight

Z4_SUMMARY = "64/64 cocycle instances OK, psi([1,3])=1"


class _CliError(Exception):
    """Carries the exit code decided by the failure phase."""

    def __init__(self, exit_code: int, err: FoamError):
        super().__init__(str(err))
        self.exit_code = exit_code
        self.err = err


# --- output helpers -----------------------------------------------------------


def _emit(args, obj, text: str) -> None:
    if args.output == "json":
        print(json.dumps(obj, indent=2, sort_keys=True))
    else:
        print(text)


def wedge_to_text(v: WedgeValue) -> str:
    entries = v.to_json()
    if not entries:
        return "0"
    return " + ".join(f"{t['coeff']}*({t['left']}^{t['right']})" for t in entries)


def bracket_to_text(s: BracketSum) -> str:
    if not s.terms:
        return "0"
    return " + ".join(
        f"{c}*[{weight_to_text(a)},{weight_to_text(b)}]" for c, a, b in s.terms
    )


def _item_text(doc: Document, kind: str, value) -> str:
    return print_document(Document(doc.basis, ((kind, "result", value),)))


# --- document plumbing --------------------------------------------------------


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_document(args) -> Document:
    try:
        text = _read_source(args.file)
    except OSError as exc:
        raise _CliError(1, FoamError(f"cannot read {args.file}: {exc}")) from None
    try:
        return parse_document(text, precision_cap=args.precision)
    except FoamError as exc:
        raise _CliError(2, exc) from None


def _resolve(doc: Document, name: str, kinds: tuple[str, ...]):
    kind, value = doc.get(name)
    if kind not in kinds:
        raise DslSemanticError(
            f"item {name!r} has kind {kind}; this subcommand needs {' or '.join(kinds)}"
        )
    return kind, value


# --- subcommand handlers ------------------------------------------------------


def _cmd_saf(args) -> int:
    doc = _load_document(args)
    _, t = _resolve(doc, args.item, ("iet",))
    v = saf(t)
    _emit(args, v.to_json(), wedge_to_text(v))
    return 0


def _cmd_compose(args) -> int:
    doc = _load_document(args)
    _, s = _resolve(doc, args.second, ("iet",))
    _, t = _resolve(doc, args.first, ("iet",))
    c = iet_compose(s, t)
    _emit(args, c.to_json(), _item_text(doc, "iet", c))
    return 0


def _cmd_apply(args) -> int:
    doc = _load_document(args)
    _, t = _resolve(doc, args.item, ("iet",))
    x = parse_weight(args.point, doc.basis)
    y = iet_apply(t, x)
    _emit(args, y.to_json(), weight_to_text(y))
    return 0


def _cmd_closure(args) -> int:
    doc = _load_document(args)
    _, t = _resolve(doc, args.item, ("iet",))
    d = iet_closure(t)
    _emit(args, d.to_json(), _item_text(doc, "foam", d))
    return 0


def _cmd_nu(args) -> int:
    doc = _load_document(args)
    _, d = _resolve(doc, args.item, ("foam",))
    v = nu(d)
    _emit(args, v.to_json(), wedge_to_text(v))
    return 0


def _cmd_classify(args) -> int:
    doc = _load_document(args)
    kind, item = _resolve(doc, args.item, ("foam", "planarfoam", "bracket"))
    if kind == "foam":
        v = nu(item)
        obj = {"nu": v.to_json(), "null_cobordant": v.is_zero()}
        text = (
            f"nu = {wedge_to_text(v)}; "
            f"null-cobordant: {'yes' if v.is_zero() else 'no'}"
        )
        _emit(args, obj, text)
        return 0
    if kind == "planarfoam":
        verdict = planar_classify(item, euclid_bound=args.euclid_bound)
    else:
        verdict = classify_bracket(item, euclid_bound=args.euclid_bound)
    text = (
        f"verdict: {verdict.verdict}; theta = {wedge_to_text(verdict.theta)}; "
        f"residual = {bracket_to_text(verdict.residual)}"
    )
    _emit(args, verdict.to_json(), text)
    return 0


def _cmd_tripods(args) -> int:
    doc = _load_document(args)
    _, f = _resolve(doc, args.item, ("planarfoam",))
    s = tripod_decompose(f)
    _emit(args, s.to_json(), bracket_to_text(s))
    return 0


def _cmd_bracket_simplify(args) -> int:
    doc = _load_document(args)
    _, s = _resolve(doc, args.item, ("bracket",))
    out = bracket_simplify(s, euclid_bound=args.euclid_bound)
    _emit(args, out.to_json(), bracket_to_text(out))
    return 0


def _cmd_theta(args) -> int:
    doc = _load_document(args)
    kind, item = _resolve(doc, args.item, ("bracket", "planarfoam"))
    s = item if kind == "bracket" else tripod_decompose(item)
    v = theta(s)
    _emit(args, v.to_json(), wedge_to_text(v))
    return 0


def _cmd_make_positive(args) -> int:
    doc = _load_document(args)
    kind, item = _resolve(doc, args.item, ("bracket", "planarfoam"))
    if kind == "bracket":
        out = bracket_sum_make_positive(item)
        _emit(args, out.to_json(), bracket_to_text(out))
    else:
        out = foam_make_positive(item)
        _emit(args, out.to_json(), _item_text(doc, "planarfoam", out))
    return 0


def _cmd_flip_reduce(args) -> int:
    doc = _load_document(args)
    _, d = _resolve(doc, args.item, ("foam",))
    trace = flip_reduce(d)
    lines = [f"{k}: {m.schema} at {m.index}" for k, m in enumerate(trace)]
    text = "\n".join([f"{len(trace)} steps"] + lines) if trace else "0 steps"
    _emit(args, {"trace": trace_to_json(trace), "steps": len(trace)}, text)
    return 0


def _cmd_validate_trace(args) -> int:
    doc = _load_document(args)
    _, d = _resolve(doc, args.item, ("foam",))
    try:
        raw = _read_source(args.trace)
    except OSError as exc:
        raise _CliError(1, FoamError(f"cannot read {args.trace}: {exc}")) from None
    try:
        data = json.loads(raw)
    except ValueError as exc:
        raise _CliError(2, DslSemanticError(f"trace is not JSON: {exc}")) from None
    trace = trace_from_json(doc.basis, data)
    chk = validate_trace(d, trace)
    if chk.ok:
        text = f"ok ({chk.steps} steps)"
    else:
        text = f"failed at step {chk.failed_at}: {chk.reason}"
    _emit(args, chk.to_json(), text)
    return 0


def _cmd_gamma(args) -> int:
    doc = _load_document(args)
    _, d = _resolve(doc, args.item, ("foam",))
    torsion = tuple(int(n) for n in args.torsion.split(",")) if args.torsion else ()
    free_rank = args.free_rank
    if free_rank is None:
        free_rank = max(
            (len(e.g.free) for e in d.events if hasattr(e, "g")), default=0
        )
    spec = AbelianGroupSpec(free_rank, torsion)
    tensor, base = gamma_fn(d, spec)
    obj = {
        "tensor": [w.to_json() for w in tensor.components],
        "nu": base.to_json(),
    }
    text = (
        "tensor: ["
        + ", ".join(weight_to_text(w) for w in tensor.components)
        + f"]; nu = {wedge_to_text(base)}"
    )
    _emit(args, obj, text)
    return 0


def _cmd_zerofoam(args) -> int:
    doc = _load_document(args)
    points = []
    for token in args.points.replace(",", " ").split():
        if token[0] not in "+-":
            raise DslSemanticError(
                f"point {token!r} must start with an explicit + or - sign"
            )
        sign = 1 if token[0] == "+" else -1
        points.append((sign, parse_weight(token[1:], doc.basis)))
    w = zerofoam_class(points)
    obj = {"class": w.to_json(), "zero": w.is_zero()}
    text = f"class = {weight_to_text(w)}; zero: {'yes' if w.is_zero() else 'no'}"
    _emit(args, obj, text)
    return 0


def _cmd_verify_z4(args) -> int:
    res = verify_z4()
    ok = (
        res["cocycle_ok"]
        and res["pairs_ok"]
        and res["bilin_ok"]
        and res["psi_1_3"] == 1
    )
    _emit(args, res, Z4_SUMMARY if ok else f"FAILED: {res}")
    return 0 if ok else 1


def _cmd_selftest(args) -> int:
    results = acceptance.run_all()
    _emit(
        args,
        [r.to_json() for r in results],
        "\n".join(r.line() for r in results),
    )
    return 0 if all(r.ok for r in results) else 1


# --- argument parsing ---------------------------------------------------------


def _positive_int(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="foamcalc",
        description="Exact invariants of weighted foam diagrams and"
        " interval exchanges.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str, report: bool = False):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler, report=report)
        p.add_argument(
            "--output",
            choices=("json", "text"),
            default=None,
            help="result form (default: %s)" % ("text" if report else "json"),
        )
        p.add_argument(
            "--precision",
            type=_positive_int,
            default=None,
            help="cap declared enclosure digits (env: FOAMCALC_PRECISION)",
        )
        p.add_argument(
            "--euclid-bound",
            type=_positive_int,
            default=DEFAULT_EUCLID_BOUND,
            help="step bound for subtractive reduction",
        )
        return p

    p = add("saf", _cmd_saf, "SAF invariant of a named IET")
    p.add_argument("file")
    p.add_argument("item")

    p = add("compose", _cmd_compose, "compose two named IETs (second . first)")
    p.add_argument("file")
    p.add_argument("second")
    p.add_argument("first")

    p = add("apply", _cmd_apply, "evaluate a named IET at a weight expression")
    p.add_argument("file")
    p.add_argument("item")
    p.add_argument("point")

    p = add("closure", _cmd_closure, "foam diagram closing a named IET")
    p.add_argument("file")
    p.add_argument("item")

    p = add("nu", _cmd_nu, "nu invariant of a named closed foam")
    p.add_argument("file")
    p.add_argument("item")

    p = add("classify", _cmd_classify, "cobordism class of a foam, planar foam or bracket")
    p.add_argument("file")
    p.add_argument("item")

    p = add("tripods", _cmd_tripods, "tripod decomposition of a planar foam")
    p.add_argument("file")
    p.add_argument("item")

    p = add("bracket-simplify", _cmd_bracket_simplify, "normal form of a bracket sum")
    p.add_argument("file")
    p.add_argument("item")

    p = add("theta", _cmd_theta, "wedge image of a bracket sum or planar foam")
    p.add_argument("file")
    p.add_argument("item")

    p = add("make-positive", _cmd_make_positive, "positive form of a bracket or planar foam")
    p.add_argument("file")
    p.add_argument("item")

    p = add("flip-reduce", _cmd_flip_reduce, "elimination trace for a dotted foam")
    p.add_argument("file")
    p.add_argument("item")

    p = add("validate-trace", _cmd_validate_trace, "check a move trace ends empty")
    p.add_argument("file")
    p.add_argument("item")
    p.add_argument("trace", help="JSON trace file, or - for stdin")

    p = add("gamma", _cmd_gamma, "label invariant of a decorated foam")
    p.add_argument("file")
    p.add_argument("item")
    p.add_argument("--free-rank", type=int, default=None)
    p.add_argument("--torsion", default="", help="comma-separated torsion orders")

    p = add("zerofoam", _cmd_zerofoam, "class of a signed weighted point collection")
    p.add_argument("file", help="document supplying the basis")
    p.add_argument("points", help="signed weights, e.g. '+1/2 -r2 +3'")

    add("verify-z4", _cmd_verify_z4, "exhaustive finite-model check", report=True)
    add("selftest", _cmd_selftest, "run the acceptance battery", report=True)

    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.output is None:
        args.output = "text" if args.report else "json"
    if args.precision is None:
        env = os.environ.get("FOAMCALC_PRECISION")
        if env:
            try:
                args.precision = _positive_int(env)
            except (ValueError, argparse.ArgumentTypeError):
                print(
                    json.dumps(
                        {
                            "error": "semantic",
                            "message": "FOAMCALC_PRECISION must be a positive integer",
                        }
                    )
                )
                return 2
    try:
        return args.handler(args)
    except _CliError as exc:
        print(json.dumps({"error": exc.err.code, "message": str(exc.err)}))
        return exc.exit_code
    except FoamError as exc:
        print(json.dumps({"error": exc.code, "message": str(exc)}))
        return 1


if __name__ == "__main__":
    sys.exit(main())
