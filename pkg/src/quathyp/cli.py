"""Command-line interface.

Matrix documents are JSON objects::

    {"field": "H", "model": "ball", "matrix": [[...], [...], [...]],
     "tolerances": {"member": 1e-8}}

Entries are quaternion strings (``"1 + 2i - j/2"``), numbers, or
``[w, x, y, z]`` arrays. Input may hold one object, a list of objects, or
one object per line; each document yields one JSON line on stdout.

Exit codes: 0 success, 2 unreadable input, 3 membership failure, 4 borderline
decision without ``--allow-borderline``.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import fields, replace
from fractions import Fraction

import numpy as np

from . import __version__
from . import qmatrix as qm
from .classifier import DynamicalType, classify, classify_literal_theorem
from .exact import QSqrt2
from .invariants import DEFAULT_TOL, Tolerances
from .model import MembershipError, get_model, membership_residual
from .normal_forms import NormalizationError, normalize, sample
from .oracle import eigen_classify
from .zclass import enumerate_zclasses, zclass_label

EXIT_PARSE = 2
EXIT_MEMBERSHIP = 3
EXIT_BORDERLINE = 4


class InputError(ValueError):
    """A document could not be parsed."""


# ------------------------------------------------------------------ output

def _plain(obj):
    """JSON-ready copy with floats kept as floats and exact scalars as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (Fraction, QSqrt2)):
        return str(obj)
    return obj


def _encode(obj) -> str:
    """Deterministic JSON with floats at 17 significant digits."""
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(k, ensure_ascii=False)}: {_encode(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, list):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if math.isfinite(obj):
            return format(obj, ".17g")
        return json.dumps(str(obj))
    return json.dumps(obj, ensure_ascii=False)


def emit(obj, out=None) -> None:
    (out or sys.stdout).write(_encode(_plain(obj)) + "\n")


# ------------------------------------------------------------------- input

def read_documents(source: str) -> list:
    text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    text = text.strip()
    if not text:
        raise InputError("empty input")
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        try:
            data = [json.loads(line) for line in text.splitlines() if line.strip()]
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
    docs = data if isinstance(data, list) else [data]
    if not all(isinstance(d, dict) and "matrix" in d for d in docs):
        raise InputError("each document must be an object with a 'matrix' entry")
    return docs


def parse_tolerance_overrides(items) -> dict:
    names = {f.name for f in fields(Tolerances)}
    out = {}
    for item in items or ():
        key, sep, val = item.partition("=")
        if not sep:
            key, val = "member", item
        if key not in names:
            raise InputError(f"unknown tolerance {key!r}; choose from {sorted(names)}")
        try:
            out[key] = float(val)
        except ValueError as exc:
            raise InputError(f"tolerance {key} needs a number, got {val!r}") from exc
    return out


class Context:
    """Per-document settings: flags overridden by the document's own keys."""

    def __init__(self, args, doc: dict):
        self.field = str(doc.get("field", args.field)).upper()
        if self.field not in ("H", "C"):
            raise InputError(f"field must be H or C, got {self.field!r}")
        self.model = get_model(doc.get("model", args.model))
        overrides = dict(args.tol_overrides)
        doc_tol = doc.get("tolerances") or {}
        if not isinstance(doc_tol, dict):
            raise InputError("'tolerances' must be an object")
        overrides.update(parse_tolerance_overrides(f"{k}={v}" for k, v in doc_tol.items()))
        self.tol = replace(DEFAULT_TOL, **overrides)
        self.exact = args.exact
        try:
            matrix = qm.exact_matrix(doc["matrix"]) if self.exact else qm.qarray(doc["matrix"])
        except (qm.MatrixFormatError, TypeError, ValueError, IndexError) as exc:
            raise InputError(f"matrix: {exc}") from exc
        shape = (len(matrix), len(matrix[0])) if self.exact else matrix.shape[:2]
        if shape != (3, 3):
            raise InputError(f"matrix must be 3x3, got {shape[0]}x{shape[1]}")
        if self.field == "C":
            complex_ok = qm.exact_is_complex(matrix) if self.exact else qm.is_complex_matrix(matrix)
            if not complex_ok:
                raise InputError("field C requires zero j and k parts")
        self.matrix = matrix


# ---------------------------------------------------------------- commands

def _classification(ctx: Context):
    return classify(ctx.matrix, ctx.model, ctx.field, ctx.tol, exact=ctx.exact)


def cmd_classify(ctx: Context, args) -> tuple:
    c = _classification(ctx)
    report = {"classification": c.to_json(), "zclass": zclass_label(c, ctx.field).to_json()}
    if args.oracle:
        o = eigen_classify(ctx.matrix if not ctx.exact else qm.exact_to_float(ctx.matrix),
                           ctx.model, ctx.field, check=False)
        report["oracle"] = {"dtype": o.slug, "agrees": o is c.dtype}
    if args.literal:
        report["literal"] = classify_literal_theorem(c.invariants, ctx.tol).to_json()
    code = EXIT_BORDERLINE if c.borderline and not args.allow_borderline else 0
    return report, code


def cmd_invariants(ctx: Context, args) -> tuple:
    c = _classification(ctx)
    report = {"invariants": c.invariants.to_json()}
    if args.literal:
        report["literal"] = classify_literal_theorem(c.invariants, ctx.tol).to_json()
    return report, (EXIT_BORDERLINE if c.borderline and not args.allow_borderline else 0)


def cmd_normal_form(ctx: Context, args) -> tuple:
    A = qm.exact_to_float(ctx.matrix) if ctx.exact else ctx.matrix
    N, S = normalize(A, ctx.model, ctx.field, ctx.tol)
    residual = qm.qmaxabs(qm.qchain(S, A, qm.qinv(S)) - N.matrix)
    return {"normal_form": N.to_json(), "conjugator": qm.to_json(S), "residual": residual}, 0


def cmd_zclass(ctx: Context, args) -> tuple:
    c = _classification(ctx)
    code = EXIT_BORDERLINE if c.borderline and not args.allow_borderline else 0
    return {"type": c.display_name, "zclass": zclass_label(c, ctx.field).to_json()}, code


def cmd_check_membership(ctx: Context, args) -> tuple:
    res = membership_residual(ctx.matrix, ctx.model)
    tol = 0.0 if ctx.exact else ctx.tol.member
    if ctx.exact:
        member = res == 0
    else:
        member = float(res) <= tol * max(1.0, qm.qmaxabs(ctx.matrix)) ** 2
    report = {"member": member, "residual": res if ctx.exact else float(res), "tolerance": tol,
              "model": ctx.model.name}
    return report, (0 if member else EXIT_MEMBERSHIP)


DOC_COMMANDS = {"classify": cmd_classify, "invariants": cmd_invariants,
                "normal-form": cmd_normal_form, "zclass": cmd_zclass,
                "check-membership": cmd_check_membership}


def run_zclasses(args) -> int:
    entries = enumerate_zclasses(args.field)
    emit([e.to_json() for e in entries])
    return 0


def run_sample(args) -> int:
    try:
        dtype = DynamicalType.parse(args.type)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    rng = np.random.default_rng(args.seed)
    for _ in range(args.count):
        try:
            s = sample(dtype, args.field, rng, model=args.model_explicit)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_PARSE
        emit({"field": s.field, "model": s.model, "matrix": qm.to_json(s.matrix),
              "label": s.dtype.slug, "base_type": s.base_type.slug,
              "normal_form": s.normal_form.to_json()})
    return 0


# ------------------------------------------------------------------ parser

def _add_common(p: argparse.ArgumentParser, suppress: bool) -> None:
    # the subcommand copies default to SUPPRESS so a flag given before the
    # subcommand is not overwritten by the subparser's default
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--field", type=str.upper, choices=["H", "C"], default=d("H"),
                   help="number field (default H)")
    p.add_argument("--model", choices=["ball", "siegel"], default=d(None),
                   help="Hermitian model of the input (default ball)")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", default=d(None),
                   help="override a tolerance; a bare number sets the membership tolerance")
    p.add_argument("--exact", action="store_true", default=d(False), help="exact rational arithmetic")
    p.add_argument("--oracle", action="store_true", default=d(False),
                   help="add the eigenvalue oracle's verdict")
    p.add_argument("--literal", action="store_true", default=d(False),
                   help="add the verdict of the theorem's inequality conditions")
    p.add_argument("--allow-borderline", action="store_true", default=d(False),
                   help="exit 0 even when a decision is within 10x of its threshold")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quathyp",
                                description="Classify isometries of the quaternionic hyperbolic plane.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    _add_common(p, suppress=False)
    sub = p.add_subparsers(dest="command", required=True)
    for name, help_text in (("classify", "dynamical type, invariants and z-class"),
                            ("invariants", "characteristic-polynomial invariants"),
                            ("normal-form", "reduce to normal form with a conjugator"),
                            ("zclass", "z-class label"),
                            ("check-membership", "form-preservation residual")):
        sp = sub.add_parser(name, help=help_text)
        _add_common(sp, suppress=True)
        sp.add_argument("input", nargs="?", default="-", help="JSON file, or - for stdin")
    sp = sub.add_parser("zclasses", help="list every z-class with a representative")
    _add_common(sp, suppress=True)
    sp = sub.add_parser("sample", help="random members of a type")
    _add_common(sp, suppress=True)
    sp.add_argument("type", help="type name, e.g. regular-elliptic")
    sp.add_argument("--count", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.model_explicit = args.model
    args.model = args.model or "ball"
    try:
        args.tol_overrides = parse_tolerance_overrides(args.tol)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if args.command == "zclasses":
        return run_zclasses(args)
    if args.command == "sample":
        return run_sample(args)
    try:
        docs = read_documents(args.input)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    worst = 0
    for doc in docs:
        try:
            ctx = Context(args, doc)
            report, code = DOC_COMMANDS[args.command](ctx, args)
        except InputError as exc:
            print(f"error: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_PARSE)
            continue
        except MembershipError as exc:
            print(f"error: {exc}", file=sys.stderr)
            worst = max(worst, EXIT_MEMBERSHIP)
            continue
        except NormalizationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            worst = max(worst, 1)
            continue
        if code == EXIT_BORDERLINE:
            print("error: borderline decision; rerun with --allow-borderline to accept it",
                  file=sys.stderr)
        emit(report)
        worst = max(worst, code)
    return worst


if __name__ == "__main__":
    sys.exit(main())
