"""``qutrit-sing`` command line: classify, catalog, perturb, tangent.

Exit codes: 0 success, 1 catalog rows failed, 2 bad input, 3 numeric or
consistency failure, 4 perturbation property breached.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys

from .catalog import CATALOG, build_state, run_catalog, sample_generic
from .classify import ConsistencyError, classify_state
from .numeric import NumericFailure, NumericTolerances
from .perturb import parse_epsilon, run_perturbation
from .report import ClassificationReport, canonical_json
from .segre import StateFormatError, StateTensor, segre_embed, tangent_pairings, pairing
from .arith import format_scalar, parse_scalar

EXIT_OK = 0
EXIT_ROWS_FAILED = 1
EXIT_SCHEMA = 2
EXIT_NUMERIC = 3
EXIT_BREACH = 4


class UsageError(ValueError):
    pass


def _load_state(path: str) -> StateTensor:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return StateTensor.from_json(text)


def _tolerances(args) -> NumericTolerances:
    defaults = NumericTolerances()
    return NumericTolerances(
        rank_threshold=args.tolerance_rank if args.tolerance_rank is not None else defaults.rank_threshold,
        root_tolerance=args.tolerance_root if args.tolerance_root is not None else defaults.root_tolerance,
        newton_tolerance=args.tolerance_newton if args.tolerance_newton is not None
        else defaults.newton_tolerance,
        dedupe_tolerance=args.tolerance_dedupe if args.tolerance_dedupe is not None
        else defaults.dedupe_tolerance,
        max_newton_iters=args.max_newton_iters if args.max_newton_iters is not None
        else defaults.max_newton_iters,
    )


def _add_tolerance_flags(p):
    p.add_argument("--tolerance-rank", type=float, help="relative singular-value cutoff")
    p.add_argument("--tolerance-root", type=float, help="root residual tolerance")
    p.add_argument("--tolerance-newton", type=float, help="Newton backward-error target")
    p.add_argument("--tolerance-dedupe", type=float, help="distance for merging points")
    p.add_argument("--max-newton-iters", type=int, help="Newton iteration cap")


def _resolve_base(spec: str, seed: int):
    """A catalog row id (generic parameters drawn from ``seed``) or a state file."""
    if spec in CATALOG:
        params = sample_generic(spec, seed) if CATALOG[spec].parameters else {}
        return build_state(spec, params), spec
    if os.path.exists(spec) or spec == "-":
        return _load_state(spec), spec
    raise UsageError(f"--base must be a catalog row id or a state file, got {spec!r}")


def cmd_classify(args) -> int:
    state = _load_state(args.state)
    tol = _tolerances(args)
    result = classify_state(state, tol)
    report = ClassificationReport(state, result, seed=args.seed, include_timings=args.timings)
    sys.stdout.write(report.to_json() if args.format == "json" else report.to_text())
    return EXIT_OK


_ROW_TOKEN = re.compile(r"\s*(N\d+|F\d+,\d+)\s*(?:[,;\s]|$)")


def _parse_rows(text: str):
    """Split ``"N1,N2,F4,3"``; F-row ids contain a comma themselves."""
    rows, pos = [], 0
    while pos < len(text):
        m = _ROW_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise UsageError(f"cannot parse row list near {text[pos:]!r}")
        rows.append(m.group(1))
        pos = m.end()
    unknown = [r for r in rows if r not in CATALOG]
    if unknown:
        raise UsageError(f"unknown rows: {' '.join(unknown)}")
    return rows


def cmd_catalog(args) -> int:
    rows = _parse_rows(args.rows) if args.rows else None
    if args.samples < 2:
        raise UsageError("--samples must be at least 2 so generic rows are tested twice")
    seeds = tuple(args.seed + i for i in range(args.samples))
    report = run_catalog(seeds=seeds, rows=rows, tol=_tolerances(args))
    sys.stdout.write(report.to_json() if args.emit == "json" else report.to_markdown())
    for row in report.failures():
        observed = ", ".join(sorted({s.observed for s in row.samples}))
        print(f"row {row.form_id} [{row.regime}]: expected {row.expected}, observed {observed}",
              file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_ROWS_FAILED


def cmd_perturb(args) -> int:
    base, name = _resolve_base(args.base, args.seed)
    try:
        eps = parse_epsilon(args.epsilon)
    except ValueError as exc:
        raise UsageError(f"bad --epsilon: {exc}") from exc
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    report = run_perturbation(base, eps, args.trials, seed=args.seed, tol=_tolerances(args),
                              base_name=name, directed=args.directed)
    sys.stdout.write(canonical_json(report.to_json_obj()))
    if report.breaches:
        for t in report.breaches:
            state = base + t.perturbation
            print(f"trial {t.index}: {t.breach}", file=sys.stderr)
            print(state.to_json(), file=sys.stderr)
        return EXIT_BREACH
    if report.errors:
        for e in report.errors:
            print(f"classification error: {e.error}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _parse_point(text: str):
    """``"i,j,k"`` for a basis point, or a JSON list of three 3-vectors."""
    text = text.strip()
    if text.startswith("["):
        try:
            vecs = json.loads(text)
            if len(vecs) != 3 or any(len(v) != 3 for v in vecs):
                raise ValueError
            return [[parse_scalar(c) for c in v] for v in vecs]
        except (ValueError, TypeError) as exc:
            raise StateFormatError("point must be three 3-vectors") from exc
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3 or any(p not in ("0", "1", "2") for p in parts):
        raise StateFormatError("point must be i,j,k with entries in {0,1,2}")
    vecs = []
    for p in parts:
        v = [0, 0, 0]
        v[int(p)] = 1
        vecs.append(v)
    return vecs


def cmd_tangent(args) -> int:
    state = _load_state(args.state)
    x, y, z = _parse_point(args.point)
    values = tangent_pairings(state, x, y, z)
    tangent = not any(values)
    obj = {"point": [[format_scalar(c) for c in v] for v in (x, y, z)],
           "on_hyperplane": not pairing(state, segre_embed(x, y, z)),
           "tangent": tangent,
           "pairings": [format_scalar(v) for v in values]}
    if args.format == "json":
        sys.stdout.write(canonical_json(obj))
    else:
        print(f"tangent: {'yes' if tangent else 'no'}")
        print("pairings: " + " ".join(str(v) for v in values))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qutrit-sing",
                                     description="Singularities of hyperplane sections of P2xP2xP2.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify one state")
    p.add_argument("--state", required=True, help="state JSON file ('-' for stdin)")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--seed", type=int, default=None, help="echoed into the report")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("catalog", help="check the normal-form tables")
    p.add_argument("--rows", help="row ids separated by commas or spaces, e.g. 'N1,N2,F4,3'")
    p.add_argument("--samples", type=int, default=2, help="generic samples per row (>= 2)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--emit", choices=("markdown", "json"), default="markdown")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("perturb", help="perturbation / adjacency experiment")
    p.add_argument("--base", required=True, help="catalog row id or state file")
    p.add_argument("--epsilon", default="1e-2")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--directed", action="store_true", help="also run the directed scan")
    _add_tolerance_flags(p)
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("tangent", help="is the hyperplane tangent at a separable point?")
    p.add_argument("--state", required=True)
    p.add_argument("--point", required=True, help="i,j,k or JSON [[x],[y],[z]]")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(func=cmd_tangent)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (StateFormatError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except ValueError as exc:
        # tolerance validation and other malformed parameters
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (NumericFailure, ConsistencyError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        diagnostics = getattr(exc, "diagnostics", None)
        if diagnostics:
            print(json.dumps(diagnostics, default=str), file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
