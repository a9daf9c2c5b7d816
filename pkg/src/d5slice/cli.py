"""Command-line interface: ``d5slice <command> [options]``.

All output is JSON on stdout (sorted keys, rationals as strings) except
``sweep``, which writes CSV.  Exit codes: 0 success, 1 mathematically
degenerate input, 2 malformed input.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from d5slice.deformation import (
    DeformationPoint,
    T1_BASIS,
    aff_dimension,
    bw_sequence,
    t1_basis_check,
    t1_dimension_truncated,
    total_space_equations,
)
from d5slice.exact_algebra import MPoly, format_rational, parse_rational
from d5slice.good_slice import (
    DegenerateSliceError,
    SliceSpec,
    good_slice_equations,
    is_degenerate,
    j_closed_form,
    parse_coord,
    pencil_from_pq,
    variety_equations,
)
from d5slice.matrix_core import Mat4, char_poly4
from d5slice.numeric_oracle import (
    DEFAULT_SEP,
    DEFAULT_TOL,
    CoincidentEigenvaluesError,
    complex_from_json,
    complex_to_json,
    j_from_eigenvalues,
    quartic_roots,
    solve_j_target,
)
from d5slice.pencil import (
    ELLIPTIC,
    MultipleRootError,
    PreconditionError,
    SymPencil,
    classify,
    j_from_charpoly,
)

EXIT_OK, EXIT_DEGENERATE, EXIT_INPUT = 0, 1, 2

# exponent vectors follow the package-wide variable order
SLICE_VARS = MPoly.zero(("a", "b", "c", "d", "e", "f")).variables
QUADRIC_VARS = MPoly.zero(("a", "b", "d", "e")).variables
VALUE_FLAGS = ("--p", "--q", "--target", "--grid", "--coeffs")


class InputError(ValueError):
    """Malformed command-line input (exit code 2)."""


class Degenerate(Exception):
    """Carries a JSON payload for a degenerate but well-formed input (exit code 1)."""

    def __init__(self, payload):
        super().__init__("degenerate input")
        self.payload = payload


def dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load_json_arg(text: str, what: str):
    """Inline JSON, or a path to a JSON file (``@path`` or an existing file name)."""
    if text.startswith("@"):
        text = text[1:]
        from_file = True
    else:
        from_file = os.path.isfile(text)
    try:
        if from_file:
            with open(text, encoding="utf-8") as fh:
                return json.load(fh)
        return json.loads(text)
    except OSError as exc:
        raise InputError(f"cannot read {what}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed {what} JSON: {exc}") from exc


def _rational(text: str, what: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{what}: {exc}") from exc


def _spec(args) -> SliceSpec:
    try:
        return SliceSpec(parse_coord(args.p), parse_coord(args.q))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad slice parameter: {exc}") from exc


def _poly_json(poly, variables):
    return poly.to_json(variables)


def _read_pencil(args) -> SymPencil:
    if args.pencil is not None:
        data = _load_json_arg("@" + args.pencil, "pencil")
    elif args.X is not None and args.Y is not None:
        data = {"X": _load_json_arg(args.X, "X"), "Y": _load_json_arg(args.Y, "Y")}
    else:
        raise InputError("give --pencil FILE or both --X and --Y")
    try:
        return SymPencil.from_json(data)
    except (ValueError, TypeError, KeyError, ZeroDivisionError) as exc:
        raise InputError(f"invalid pencil: {exc}") from exc


# -- commands ---------------------------------------------------------------------


def cmd_classify(args):
    result = classify(_read_pencil(args))
    if result.verdict != ELLIPTIC:
        raise Degenerate(result.to_json())
    return result.to_json()


def cmd_jinv(args):
    if args.coeffs is not None:
        parts = args.coeffs.split(",")
        if len(parts) != 4:
            raise InputError("--coeffs needs four comma-separated rationals a,b,c,d")
        coeffs = tuple(_rational(x, "--coeffs") for x in parts)
    elif args.matrix is not None:
        try:
            coeffs = char_poly4(Mat4.from_json(_load_json_arg(args.matrix, "matrix")))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise InputError(f"invalid matrix: {exc}") from exc
    else:
        raise InputError("give --coeffs a,b,c,d or --matrix JSON")
    out = {"coeffs": [format_rational(c) for c in coeffs]}
    try:
        j = j_from_charpoly(*coeffs)
    except MultipleRootError:
        out["degenerate"] = True
        raise Degenerate(out)
    out["j"] = format_rational(j)
    if args.numeric:
        try:
            roots = quartic_roots(*(float(c) for c in coeffs))
            out["j_numeric"] = complex_to_json(j_from_eigenvalues(*roots, sep=args.sep))
        except CoincidentEigenvaluesError as exc:
            out["j_numeric_error"] = str(exc)
    return out


def cmd_slice(args):
    spec = _spec(args)
    if not spec.is_finite:
        raise Degenerate({"degenerate": True})
    emit = {"equations", "pencil", "j"} if args.emit == "all" else {args.emit}
    out = {"t": format_rational(spec.t)}
    if "equations" in emit:
        l1, l2 = good_slice_equations(spec)
        g1, g2 = variety_equations(spec)
        out["equations"] = {
            "slice": [_poly_json(l1, SLICE_VARS), _poly_json(l2, SLICE_VARS)],
            "slice_variables": list(SLICE_VARS),
            "quadrics": [_poly_json(g1, QUADRIC_VARS), _poly_json(g2, QUADRIC_VARS)],
            "quadric_variables": list(QUADRIC_VARS),
        }
    if "pencil" in emit:
        out["pencil"] = pencil_from_pq(spec).to_json()
    if is_degenerate(spec):
        out["degenerate"] = True
        raise Degenerate(out)
    if "j" in emit:
        out["j"] = format_rational(j_closed_form(spec))
    return out


def cmd_deform(args):
    spec = _spec(args)
    data = _load_json_arg(args.point, "point") if args.point else {}
    try:
        point = DeformationPoint.from_json(data)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"invalid deformation point: {exc}") from exc
    try:
        h1, h2 = total_space_equations(spec, point)
    except DegenerateSliceError as exc:
        raise Degenerate({"degenerate": True, "reason": str(exc)}) from exc
    return {"h1": _poly_json(h1, QUADRIC_VARS), "h2": _poly_json(h2, QUADRIC_VARS),
            "variables": list(QUADRIC_VARS), "point": point.to_json()}


def cmd_t1(args):
    spec = _spec(args)
    if args.bound < 4:
        raise InputError("--bound must be at least 4")
    if not spec.is_finite or is_degenerate(spec):
        raise Degenerate({"degenerate": True})
    if not all(isinstance(x, Fraction) for x in (spec.p, spec.q)):
        raise InputError("t1 needs rational p and q")
    dims = {n: t1_dimension_truncated(spec, n) for n in (args.bound - 1, args.bound)}
    dim = dims[args.bound]
    return {
        "dim": dim,
        "stable": dims[args.bound - 1] == dim,
        "bound": args.bound,
        "basis": [[str(v.first), str(v.second)] for v in T1_BASIS],
        "basis_spans": t1_basis_check(spec, args.bound),
    }


def cmd_bw(args):
    try:
        bw = bw_sequence(args.m)
        aff = aff_dimension(args.m)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    return {"bw": str(bw), "aff_dim": aff}


def _parse_complex(text: str) -> complex:
    text = text.strip()
    if text.startswith("{"):
        try:
            return complex_from_json(json.loads(text))
        except (json.JSONDecodeError, ValueError, TypeError) as exc:
            raise InputError(f"bad complex target: {exc}") from exc
    if "," in text:
        re_part, im_part = text.split(",", 1)
        return complex(float(_rational(re_part, "--target")), float(_rational(im_part, "--target")))
    try:
        return complex(float(parse_rational(text)))
    except (ValueError, ZeroDivisionError):
        pass
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise InputError(f"bad complex target {text!r}") from exc


def cmd_solve_j(args):
    target = _parse_complex(args.target)
    sol = solve_j_target(target, tol=args.tol)
    return {"target": complex_to_json(target),
            "roots": [complex_to_json(t) for t in sol.roots],
            "filtered": [complex_to_json(t) for t in sol.filtered]}


def _parse_axis(text: str, name: str) -> list[Fraction]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"grid axis {name} must be min:max:steps")
    lo, hi = _rational(parts[0], "--grid"), _rational(parts[1], "--grid")
    try:
        steps = int(parts[2])
    except ValueError as exc:
        raise InputError(f"grid steps must be an integer, got {parts[2]!r}") from exc
    if steps < 1:
        raise InputError("grid steps must be positive")
    if steps == 1:
        return [lo]
    return [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]


def parse_grid(text: str) -> tuple[list[Fraction], list[Fraction]]:
    axes = text.split(",")
    if len(axes) != 2:
        raise InputError('--grid must look like "pmin:pmax:steps,qmin:qmax:steps"')
    return _parse_axis(axes[0], "p"), _parse_axis(axes[1], "q")


def sweep_rows(ps, qs):
    """Row-major ``(p, q, t, j)`` rows and the skipped degenerate points."""
    rows, skipped = [], []
    for p in ps:
        for q in qs:
            spec = SliceSpec(p, q)
            if is_degenerate(spec):
                skipped.append((p, q, spec.t))
                continue
            j = j_closed_form(spec)
            rows.append((p, q, spec.t, j))
    return rows, skipped


def write_sweep_csv(fh, rows, skipped) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["p", "q", "t", "j_exact", "j_float"])
    for p, q, t, j in rows:
        writer.writerow([format_rational(p), format_rational(q), format_rational(t),
                         format_rational(j), repr(float(j))])
    for p, q, t in skipped:
        fh.write(f"# degenerate p={format_rational(p)} q={format_rational(q)} "
                 f"t={format_rational(t)}\n")


def cmd_sweep(args):
    ps, qs = parse_grid(args.grid)
    rows, skipped = sweep_rows(ps, qs)
    if args.out is None or args.out == "-":
        write_sweep_csv(sys.stdout, rows, skipped)
        return None
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_sweep_csv(fh, rows, skipped)
    return {"out": args.out, "rows": len(rows), "degenerate": len(skipped)}


# -- argument parsing -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="numeric residual tolerance (default %(default)g)")
    common.add_argument("--sep", type=float, default=DEFAULT_SEP,
                        help="relative eigenvalue separation threshold (default %(default)g)")

    parser = argparse.ArgumentParser(
        prog="d5slice",
        description="Exact computations for D5-tilde singularities on good slices of sl(2)+sl(2).")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a pencil of quadrics")
    p.add_argument("--pencil", help='JSON file {"X": [[...]], "Y": [[...]]}')
    p.add_argument("--X", help="inline JSON rows of X")
    p.add_argument("--Y", help="inline JSON rows of Y")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("jinv", parents=[common], help="j-invariant from a characteristic polynomial")
    p.add_argument("--coeffs", help="a,b,c,d of t^4 - a t^3 + b t^2 - c t + d")
    p.add_argument("--matrix", help="4x4 matrix as JSON (inline or file)")
    p.add_argument("--numeric", action="store_true",
                   help="also evaluate the cross-ratio formula on numeric roots")
    p.set_defaults(func=cmd_jinv)

    p = sub.add_parser("slice", parents=[common], help="good slice data for (p, q)")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--emit", choices=("equations", "pencil", "j", "all"), default="all")
    p.set_defaults(func=cmd_slice)

    p = sub.add_parser("deform", parents=[common], help="fiber equations of the deformation")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--point", help="JSON object with alpha, beta, gamma, delta, epsilon, lambda, mu")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("t1", parents=[common], help="truncated T^1 dimension")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--bound", type=int, default=5, help="degree truncation (default %(default)s)")
    p.set_defaults(func=cmd_t1)

    p = sub.add_parser("bw", parents=[common], help="BW(m) and the affine-subspace dimension")
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_bw)

    p = sub.add_parser("solve-j", parents=[common], help="all t with j(t) equal to a target")
    p.add_argument("--target", required=True,
                   help='rational, "re,im", or {"re": .., "im": ..}')
    p.set_defaults(func=cmd_solve_j)

    p = sub.add_parser("sweep", parents=[common], help="CSV of j over a (p, q) grid")
    p.add_argument("--grid", required=True, help='"pmin:pmax:steps,qmin:qmax:steps"')
    p.add_argument("--out", help="output CSV path (default stdout)")
    p.set_defaults(func=cmd_sweep)
    return parser


def _join_negative_values(argv):
    """``--q -5/2`` becomes ``--q=-5/2`` so argparse does not read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") \
                and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_negative_values(argv))
    try:
        out = args.func(args)
    except Degenerate as exc:
        print(dump(exc.payload))
        return EXIT_DEGENERATE
    except (DegenerateSliceError, MultipleRootError, PreconditionError,
            CoincidentEigenvaluesError) as exc:
        print(dump({"degenerate": True, "reason": str(exc)}))
        return EXIT_DEGENERATE
    except InputError as exc:
        print(f"d5slice {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if out is not None:
        print(dump(out))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
