"""Command-line surface: deterministic JSON reports for every pipeline.

Every report is wrapped in an envelope carrying the command, content digests
of the input documents, the seed, the parameters, and the tool version, so
repeated invocations with equal inputs are byte-identical. Errors print a
machine-readable object and exit non-zero (2 parse, 3 budget, 4
reconstruction ambiguity, 1 anything else).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction

from . import __version__
from .distribution import (
    DEFAULT_BUDGET,
    exact_corner_distribution,
    exact_tensor_corner,
    sample_matrix,
    sample_tensor,
)
from .documents import (
    format_rational,
    parse_function_document,
    parse_rational,
    serialize_corner_key,
    serialize_function,
    serialize_tensor_key,
)
from .errors import (
    AmbiguousCell,
    BudgetExceeded,
    EmptyCell,
    MatdistError,
    ParseError,
)
from .functions import FiniteFunction, isomorphic, purify
from .reconstruction import reconstruction_check
from .symmetry import congruence_group

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_AMBIGUOUS = 4


def _load_document(path: str):
    try:
        with open(path, "rb") as handle:
            raw = handle.read()
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from exc
    return parse_function_document(doc), hashlib.sha256(raw).hexdigest()


def _require_matrix(f, path):
    if not isinstance(f, FiniteFunction):
        raise ParseError(f"{path}: this command needs a two-variable document")
    return f


def _envelope(command, digests, parameters, seed, result):
    return {
        "command": command,
        "input_digests": digests,
        "parameters": parameters,
        "seed": seed,
        "result": result,
        "tool_version": __version__,
    }


def _emit(report, out_path):
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _cmd_purify(args):
    f, digest = _load_document(args.input)
    f = _require_matrix(f, args.input)
    pure, maps = purify(f)
    result = {
        "document": serialize_function(pure),
        "row_projection": {str(k): str(v) for k, v in maps.row_projection.items()},
        "col_projection": {str(k): str(v) for k, v in maps.col_projection.items()},
    }
    return _envelope("purify", {"f": digest}, {}, None, result)


def _cmd_iso(args):
    f, digest_f = _load_document(args.f)
    g, digest_g = _load_document(args.g)
    f = _require_matrix(f, args.f)
    g = _require_matrix(g, args.g)
    digests = {"f": digest_f, "g": digest_g}
    params = {"mode": args.mode, "k": args.k, "budget": args.budget}
    if args.mode == "canonical":
        witness = isomorphic(f, g)
        result = {"isomorphic": witness is not None}
        if witness is not None:
            result["witness"] = {
                "row_map": {str(k): str(v) for k, v in witness.row_map.items()},
                "col_map": {str(k): str(v) for k, v in witness.col_map.items()},
            }
        return _envelope("iso", digests, params, None, result)

    df = exact_corner_distribution(f, args.k, args.budget)
    dg = exact_corner_distribution(g, args.k, args.budget)
    if df.entries == dg.entries:
        result = {"isomorphic_at_k": True, "k": args.k}
    else:
        keys = sorted(
            df.entries.keys() | dg.entries.keys(), key=serialize_corner_key
        )
        corner = next(
            key
            for key in keys
            if df.entries.get(key) != dg.entries.get(key)
        )
        result = {
            "isomorphic_at_k": False,
            "k": args.k,
            "distinguishing_corner": {
                "corner": serialize_corner_key(corner),
                "p_f": format_rational(df.entries.get(corner, Fraction(0))),
                "p_g": format_rational(dg.entries.get(corner, Fraction(0))),
            },
        }
    return _envelope("iso", digests, params, None, result)


def _cmd_matdist(args):
    f, digest = _load_document(args.input)
    params = {"k": args.k, "budget": args.budget}
    if isinstance(f, FiniteFunction):
        dist = exact_corner_distribution(f, args.k, args.budget)
        entries = {
            serialize_corner_key(m): format_rational(p)
            for m, p in dist.entries.items()
        }
        result = {"k": args.k, "entries": entries}
    else:
        dist = exact_tensor_corner(f, args.k, args.budget)
        entries = {
            serialize_tensor_key(t): format_rational(p)
            for t, p in dist.entries.items()
        }
        result = {"k": args.k, "arity": dist.arity, "entries": entries}
    return _envelope("matdist", {"f": digest}, params, None, result)


def _cmd_sample(args):
    f, digest = _load_document(args.input)
    params = {"N": args.n}
    if isinstance(f, FiniteFunction):
        r = sample_matrix(f, args.n, args.seed)
        result = {
            "n_rows": r.n_rows,
            "n_cols": r.n_cols,
            "values": [[str(v) for v in row] for row in r.values],
            "row_atoms": list(r.row_atoms),
            "col_atoms": list(r.col_atoms),
        }
    else:
        t = sample_tensor(f, args.n, args.seed)
        result = {
            "arity": t.arity,
            "shape": list(t.shape),
            "values": [str(t.labels[c]) for c in t.codes],
            "axis_atoms": [list(a) for a in t.axis_atoms],
        }
    return _envelope("sample", {"f": digest}, params, args.seed, result)


def _cmd_reconstruct(args):
    f, digest = _load_document(args.input)
    f = _require_matrix(f, args.input)
    tol = parse_rational(args.tol, "--tol")
    min_mass = parse_rational(args.min_class_mass, "--min-class-mass")
    report = reconstruction_check(f, args.n, args.depth, args.seed, tol, min_mass)
    params = {
        "N": args.n,
        "depth": args.depth,
        "tol": args.tol,
        "min_class_mass": args.min_class_mass,
    }
    result = {
        "reconstructed": serialize_function(report.reconstructed),
        "isomorphic_to_source": report.isomorphic_to_source,
        "weight_tv": format_rational(report.weight_tv),
        "depth_used": report.depth_used,
    }
    return _envelope("reconstruct", {"f": digest}, params, args.seed, result)


def _cmd_congruence(args):
    f, digest = _load_document(args.input)
    f = _require_matrix(f, args.input)
    group = congruence_group(f)
    result = {
        "order": group.order,
        "x_atoms": [str(a) for a in group.x_atom_ids],
        "y_atoms": [str(a) for a in group.y_atom_ids],
        "elements": [
            {"rows": list(sigma), "cols": list(tau)}
            for sigma, tau in group.elements
        ],
    }
    return _envelope("congruence", {"f": digest}, {}, None, result)


def _cmd_simplicity(args):
    f, digest = _load_document(args.input)
    f = _require_matrix(f, args.input)
    group = congruence_group(f)
    result = {"simple": group.order == 1, "group_order": group.order}
    return _envelope("simplicity", {"f": digest}, {}, None, result)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matdist",
        description="Classify finite functions of two (or more) variables: "
        "purification, isomorphism, matrix corner distributions, "
        "reconstruction, congruence groups, simplicity.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output(p):
        p.add_argument("-o", "--output", help="write the report here instead of stdout")

    p = sub.add_parser("purify", help="emit the pure factor and both projections")
    p.add_argument("input")
    add_output(p)
    p.set_defaults(func=_cmd_purify)

    p = sub.add_parser("iso", help="decide isomorphism two ways")
    p.add_argument("f")
    p.add_argument("g")
    p.add_argument("--mode", choices=["canonical", "corners"], default="canonical")
    p.add_argument("--k", type=int, default=2, help="corner size (corners mode)")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    add_output(p)
    p.set_defaults(func=_cmd_iso)

    p = sub.add_parser("matdist", help="exact k-corner distribution")
    p.add_argument("input")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    add_output(p)
    p.set_defaults(func=_cmd_matdist)

    p = sub.add_parser("sample", help="sample a value matrix (or tensor)")
    p.add_argument("input")
    p.add_argument("--N", dest="n", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    add_output(p)
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("reconstruct", help="sample, rebuild, compare to the pure factor")
    p.add_argument("input")
    p.add_argument("--N", dest="n", type=int, default=2000)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", default="1/20")
    p.add_argument("--min-class-mass", default="1/100")
    add_output(p)
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("congruence", help="the congruence group of the pure factor")
    p.add_argument("input")
    add_output(p)
    p.set_defaults(func=_cmd_congruence)

    p = sub.add_parser("simplicity", help="decide simplicity of the matrix law")
    p.add_argument("input")
    add_output(p)
    p.set_defaults(func=_cmd_simplicity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = args.func(args)
    except ParseError as exc:
        _emit_error(exc)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        _emit_error(exc)
        return EXIT_BUDGET
    except (AmbiguousCell, EmptyCell) as exc:
        _emit_error(exc)
        return EXIT_AMBIGUOUS
    except (MatdistError, ValueError) as exc:
        _emit_error(exc)
        return EXIT_ERROR
    _emit(report, args.output)
    return EXIT_OK


def _emit_error(exc):
    obj = {"error": {"type": type(exc).__name__, "message": str(exc)}}
    sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def console_main() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    raise SystemExit(main())
