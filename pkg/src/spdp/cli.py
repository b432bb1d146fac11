"""``spdp`` command line: rank, sweep, pipeline, verify, family, bound.

Exit codes: 0 ok, 2 parse error, 3 budget exceeded, 4 property violation,
5 internal error.  Every report embeds the tool version and effective config.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile

from . import __version__
from .algebra import MULTILINEAR, STANDARD, field_from_name, format_polynomial, parse_polynomial
from .core import CONVENTIONS, EXACT, SpdpParams, codimension
from .errors import (BudgetExceededError, ParseError, PropertyViolation, SpdpError,
                     StageError)
from .families import KINDS, FamilySpec, build_family
from .localwidth import (LocalModel, circuit_rank_bound, count_kappa_step_sequences,
                         count_profiles, default_model, monomial_coordinate_budget,
                         profile_subspace_dim, realized_profiles, round_transitions)
from .pipeline import (Circuit, PipelineParams, run_manifest, run_pipeline,
                       runs_to_csv)
from .verify import SUITES, run_suite

EXIT_OK, EXIT_PARSE, EXIT_BUDGET, EXIT_PROPERTY, EXIT_INTERNAL = 0, 2, 3, 4, 5


# -----------------------------
# Input helpers
# -----------------------------

def parse_family(text: str) -> FamilySpec:
    """``kind:key=value,...``, a JSON object, or a path to a JSON file."""
    if os.path.isfile(text):
        with open(text) as fh:
            text = fh.read()
    s = text.strip()
    if s.startswith("{"):
        try:
            return FamilySpec.from_json(s)
        except (ValueError, KeyError) as exc:
            raise ParseError(f"bad family JSON: {exc}") from None
    kind, _, rest = s.partition(":")
    if kind not in KINDS:
        raise ParseError(f"unknown family kind {kind!r}; choose from {', '.join(KINDS)}")
    params, seed = {}, 0
    for item in filter(None, rest.split(",")):
        key, eq, val = item.partition("=")
        if not eq:
            raise ParseError(f"family parameter {item!r} is not key=value")
        if key == "seed":
            seed = int(val)
            continue
        try:
            params[key] = int(val)
        except ValueError:
            params[key] = val
    return FamilySpec(kind, params, seed)


def load_polynomial(args, field_):
    """Polynomial from ``--family``, ``--file`` or the positional text (``-`` reads stdin)."""
    if getattr(args, "family", None):
        spec = parse_family(args.family)
        return build_family(spec, field_), {"family": spec.to_dict()}
    if getattr(args, "file", None):
        with open(args.file) as fh:
            text = fh.read()
    elif args.poly == "-":
        text = sys.stdin.read()
    elif args.poly is not None:
        text = args.poly
    else:
        raise ParseError("no polynomial given")
    return parse_polynomial(text, args.n, args.mode, field_), {"poly": text.strip()}


def parse_range(text: str) -> list:
    """``"0:3"`` (inclusive) or ``"0,1,2"``."""
    try:
        if ":" in text:
            a, b = text.split(":")
            return list(range(int(a), int(b) + 1))
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"bad range {text!r}") from None


def config_of(args) -> dict:
    keys = ("command", "kappa", "ell", "convention", "field", "seed", "format", "budget",
            "mode", "n")
    cfg = {k: getattr(args, k) for k in keys if hasattr(args, k)}
    cfg["budget_effective"] = SpdpParams(0, 0, budget=getattr(args, "budget", None)).cap
    return cfg


def emit(doc: dict, fmt: str, out=None, csv_text: str = None):
    """Write one report: JSON (canonical), CSV (derived) or plain human text."""
    out = out or sys.stdout
    if fmt == "csv" and csv_text is not None:
        meta = {k: doc[k] for k in ("version", "config") if k in doc}
        text = "".join(f"# {k}={json.dumps(v, sort_keys=True)}\n" for k, v in meta.items()) + csv_text
    elif fmt == "human":
        text = "".join(f"{k}: {json.dumps(v, sort_keys=True) if isinstance(v, (dict, list)) else v}\n"
                       for k, v in doc.items())
    else:
        text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    out.write(text)


def write_atomic(path: str, text: str):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".spdp-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _doc(args, **body) -> dict:
    return {"version": __version__, "config": config_of(args), **body}


# -----------------------------
# Commands
# -----------------------------

def cmd_rank(args) -> int:
    field_ = field_from_name(args.field)
    p, source = load_polynomial(args, field_)
    params = SpdpParams(args.kappa, args.ell, args.convention, budget=args.budget)
    report = codimension(p, params, field_)
    emit(_doc(args, source=source, report=report.to_dict()), args.format)
    return EXIT_OK


def cmd_sweep(args) -> int:
    field_ = field_from_name(args.field)
    p, source = load_polynomial(args, field_)
    if args.permute:
        perm = [int(x) for x in args.permute.split(",")]
        p = p.permute(perm)
        source["permutation"] = perm
    kappas, ells = parse_range(args.kappa_range), parse_range(args.ell_range)
    grid = []
    for k in kappas:
        for l in ells:
            r = codimension(p, SpdpParams(k, l, args.convention, budget=args.budget), field_)
            grid.append({"kappa": k, "ell": l, "gamma": r.gamma, "ambient_dim": r.ambient_dim,
                         "codim": r.codim})
    violations = []
    by_k = {}
    for row in grid:
        by_k.setdefault(row["kappa"], []).append(row)
    for rows in by_k.values():
        rows.sort(key=lambda r: r["ell"])
        for a, b in zip(rows, rows[1:]):
            if a["gamma"] > b["gamma"]:
                violations.append({"kappa": a["kappa"], "ell": a["ell"], "ell_next": b["ell"],
                                   "gamma": a["gamma"], "gamma_next": b["gamma"]})
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("kappa", "ell", "gamma", "ambient_dim", "codim"))
    for row in grid:
        w.writerow((row["kappa"], row["ell"], row["gamma"], row["ambient_dim"], row["codim"]))
    emit(_doc(args, source=source, grid=grid, violations=violations), args.format,
         csv_text=out.getvalue())
    if violations:
        raise PropertyViolation("rank decreased as ell grew", violations)
    return EXIT_OK


def pipeline_params(args) -> PipelineParams:
    return PipelineParams(c_w=args.c_w, density=args.density, kappa=args.kappa, ell=args.ell,
                          convention=args.convention, field=args.field,
                          compress=not args.no_compress, signature=args.signature,
                          window_clauses=args.window_clauses, budget=args.budget)


def cmd_pipeline(args) -> int:
    params = pipeline_params(args)
    if args.circuit:
        with open(args.circuit) as fh:
            runs = [run_pipeline(Circuit.parse(fh.read()), params, args.seed or 0)]
    elif args.manifest:
        source = args.manifest
        if os.path.isfile(source):
            with open(source) as fh:
                source = fh.read()
        runs = run_manifest(source, params, args.seed)
    elif args.spec:
        spec = parse_family(args.spec)
        runs = [run_pipeline(spec, params, spec.seed if args.seed is None else args.seed)]
    else:
        raise ParseError("give a family spec, --manifest or --circuit")
    doc = _doc(args, pipeline=params.to_dict(), runs=[r.to_dict() for r in runs])
    text_out = io.StringIO()
    emit(doc, args.format, text_out, csv_text=runs_to_csv(runs))
    if args.output:
        write_atomic(args.output, text_out.getvalue())
    else:
        sys.stdout.write(text_out.getvalue())
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else [args.suite]
    results = [run_suite(s, args.cases, args.seed or 0) for s in names]
    doc = _doc(args, suites=[r.to_dict() for r in results],
               passed=all(r.passed for r in results))
    emit(doc, args.format)
    if not doc["passed"]:
        raise PropertyViolation("property suite failed",
                                [f for r in results for f in r.failures])
    return EXIT_OK


def cmd_family(args) -> int:
    field_ = field_from_name(args.field)
    spec = parse_family(args.spec)
    p = build_family(spec, field_)
    if args.format == "human":
        sys.stdout.write(format_polynomial(p) + "\n")
    else:
        emit(_doc(args, family=spec.to_dict(), n=p.n, mode=p.mode,
                  terms=len(p.terms), polynomial=format_polynomial(p)), args.format)
    return EXIT_OK


def cmd_bound(args) -> int:
    kind = args.which
    if kind == "profiles":
        value, inputs = count_profiles(args.R, args.S_prime), {"R": args.R, "S_prime": args.S_prime}
    elif kind == "steps":
        value = count_kappa_step_sequences(args.T, args.kappa)
        inputs = {"T_step": args.T, "kappa": args.kappa}
    elif kind == "circuit":
        value = circuit_rank_bound(args.s, args.n, args.kappa, args.ell, args.c_gate)
        inputs = {"s": args.s, "n": args.n, "kappa": args.kappa, "ell": args.ell,
                  "c_gate": args.c_gate}
    elif kind == "subspace":
        try:
            profile = json.loads(args.profile)
        except json.JSONDecodeError as exc:
            raise ParseError(f"profile must be a JSON object: {exc}") from None
        dims = json.loads(args.local_dims) if args.local_dims.strip().startswith("{") \
            else int(args.local_dims)
        value = profile_subspace_dim(profile, dims)
        inputs = {"profile": profile, "local_dims": dims}
    elif kind == "budget":
        value = monomial_coordinate_budget(args.n, args.kappa, args.ell, args.B)
        inputs = {"n": args.n, "kappa": args.kappa, "ell": args.ell, "B": args.B}
    else:  # realized
        model = default_model()
        if args.model:
            with open(args.model) as fh:
                model = LocalModel.from_json(fh.read())
        R = model.R if args.R is None else args.R
        value = len(realized_profiles(model, args.kappa, R))
        inputs = {"model": model.to_dict(), "R": R, "kappa": args.kappa,
                  "count_profiles": count_profiles(R, model.S_prime),
                  "T_step": round_transitions(model, R)}
    emit(_doc(args, bound=kind, inputs=inputs, value=value), args.format)
    return EXIT_OK


# -----------------------------
# Parser
# -----------------------------

def _common(p: argparse.ArgumentParser, kappa_default=1, ell_default=1):
    p.add_argument("--kappa", type=int, default=kappa_default)
    p.add_argument("--ell", type=int, default=ell_default)
    p.add_argument("--convention", choices=CONVENTIONS, default=EXACT)
    p.add_argument("--field", default="q", help="q (rationals) or gfp (default prime)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--format", choices=("json", "csv", "human"), default="json")
    p.add_argument("--budget", type=int, default=None, help="ambient column cap")


def _poly_source(p: argparse.ArgumentParser):
    p.add_argument("poly", nargs="?", help="polynomial text, or - for stdin")
    p.add_argument("--file", help="read polynomial text from a file")
    p.add_argument("--family", help="family spec, e.g. permanent:d=3")
    p.add_argument("--mode", choices=(MULTILINEAR, STANDARD), default=MULTILINEAR)
    p.add_argument("--n", type=int, default=None, help="number of variables")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spdp", description="Exact SPDP rank toolkit.")
    ap.add_argument("--version", action="version", version=f"spdp {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank and codimension of one polynomial")
    _poly_source(p)
    _common(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("sweep", help="rank over a (kappa, ell) grid")
    _poly_source(p)
    _common(p)
    p.add_argument("--kappa-range", default="0:2")
    p.add_argument("--ell-range", default="0:2")
    p.add_argument("--permute", help="comma-separated 0-based permutation applied first")
    p.set_defaults(func=cmd_sweep, format="csv")

    p = sub.add_parser("pipeline", help="circuit -> CNF -> window -> rank collapse check")
    p.add_argument("spec", nargs="?", help="family spec (kind:key=value,... or JSON)")
    p.add_argument("--manifest", help="bundled manifest name or JSON file")
    p.add_argument("--circuit", help="circuit DSL file")
    _common(p, kappa_default=None, ell_default=2)
    p.add_argument("--density", type=float, default=PipelineParams.density)
    p.add_argument("--c-w", type=float, default=PipelineParams.c_w, dest="c_w")
    p.add_argument("--signature", choices=("set", "multiset"), default=PipelineParams.signature)
    p.add_argument("--window-clauses", choices=("induced", "touching"),
                   default=PipelineParams.window_clauses)
    p.add_argument("--no-compress", action="store_true")
    p.add_argument("--output", help="write the report here (atomically)")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("verify", help="run a property suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("json", "human"), default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("family", help="print a family's polynomial")
    p.add_argument("spec", help="e.g. permanent:d=3 or random_deg3:n=8,seed=1")
    p.add_argument("--field", default="q")
    p.add_argument("--format", choices=("json", "human"), default="human")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("bound", help="local-width counting and bound calculators")
    bsub = p.add_subparsers(dest="which", required=True)
    b = bsub.add_parser("profiles")
    b.add_argument("--R", type=int, required=True)
    b.add_argument("--S-prime", type=int, required=True, dest="S_prime")
    b = bsub.add_parser("steps")
    b.add_argument("--T", type=int, required=True)
    b.add_argument("--kappa", type=int, required=True)
    b = bsub.add_parser("circuit")
    b.add_argument("--s", type=int, required=True)
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--kappa", type=int, required=True)
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--c-gate", type=int, default=2, dest="c_gate")
    b = bsub.add_parser("subspace")
    b.add_argument("--profile", required=True, help='JSON histogram, e.g. {"a": 2}')
    b.add_argument("--local-dims", required=True, dest="local_dims",
                   help="one int for every type or a JSON object per type")
    b = bsub.add_parser("budget")
    b.add_argument("--n", type=int, required=True)
    b.add_argument("--kappa", type=int, required=True)
    b.add_argument("--ell", type=int, required=True)
    b.add_argument("--B", type=int, default=1)
    b = bsub.add_parser("realized")
    b.add_argument("--kappa", type=int, required=True)
    b.add_argument("--R", type=int, default=None)
    b.add_argument("--model", help="model JSON file (default: bundled two-letter model)")
    for b in bsub.choices.values():
        b.add_argument("--format", choices=("json", "human"), default="json")
    p.set_defaults(func=cmd_bound)
    return ap


def _fail(code: int, kind: str, exc: BaseException, extra=None) -> int:
    doc = {"version": __version__, "error": kind, "message": str(exc)}
    if extra is not None:
        doc["instance"] = extra
    sys.stderr.write(json.dumps(doc, sort_keys=True, default=str) + "\n")
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_PARSE
    try:
        return args.func(args)
    except StageError as exc:
        if isinstance(exc.cause, BudgetExceededError):
            return _fail(EXIT_BUDGET, "budget", exc)
        if isinstance(exc.cause, ParseError):
            return _fail(EXIT_PARSE, "parse", exc)
        return _fail(EXIT_INTERNAL, "internal", exc)
    except ParseError as exc:
        return _fail(EXIT_PARSE, "parse", exc)
    except BudgetExceededError as exc:
        return _fail(EXIT_BUDGET, "budget", exc)
    except PropertyViolation as exc:
        return _fail(EXIT_PROPERTY, "property", exc, exc.instance)
    except (SpdpError, ValueError, OSError) as exc:
        return _fail(EXIT_INTERNAL, "internal", exc)


if __name__ == "__main__":
    sys.exit(main())
