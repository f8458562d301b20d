"""Command-line front end.

Exit codes: 0 success (or an equivalent verdict), 1 negative verdict,
2 usage, parse or validation error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import sys
import time
from fractions import Fraction
from importlib import resources
from typing import Any, Optional

import jsonschema

from . import __version__
from .errors import (
    FrobndError,
    HorizonTooSmall,
    IterationTooLarge,
    NumericalError,
    ValidationError,
)
from .growth import gamma_curve, slack
from .multiplicity import multiplicity
from .rigidity import same_growth
from .semigroup import frobenius_set, saturation_context
from .vecset import VectorSet, validate

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULT_KMAX = 200
DEFAULT_POINTS = 90
DEFAULT_TOLERANCE = 1e-8
DEFAULT_ITERATION_CAP = 10 ** 6


class InputError(Exception):
    """A vector-set file could not be read, parsed or validated."""


# --------------------------------------------------------------------------
# input


def _schema() -> dict:
    text = resources.files("frobnd").joinpath("schema/vectorset.schema.json").read_text()
    return json.loads(text)


def _line_of(text: str, path) -> Optional[int]:
    """1-based line of the JSON value at ``path`` (keys and indices), if found."""
    dec = json.JSONDecoder()
    ws = " \t\r\n"

    def skip(i):
        while i < len(text) and text[i] in ws:
            i += 1
        return i

    i = skip(0)
    for step in path:
        if i >= len(text):
            return None
        if text[i] == "{" and isinstance(step, str):
            i = skip(i + 1)
            while text[i] != "}":
                key, i = dec.raw_decode(text, i)
                i = skip(skip(i) + 1)
                if key == step:
                    break
                _, i = dec.raw_decode(text, i)
                i = skip(i)
                if text[i] == ",":
                    i = skip(i + 1)
            else:
                return None
        elif text[i] == "[" and isinstance(step, int):
            i = skip(i + 1)
            for _ in range(step):
                if text[i] == "]":
                    return None
                _, i = dec.raw_decode(text, i)
                i = skip(i)
                if text[i] == ",":
                    i = skip(i + 1)
            if text[i] == "]":
                return None
        else:
            return None
    return text.count("\n", 0, i) + 1


def parse_vectorset_text(text: str, source: str = "<input>") -> tuple[VectorSet, Optional[str]]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{source}:{e.lineno}:{e.colno}: invalid JSON: {e.msg}") from None
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as e:
        path = list(e.absolute_path)
        line = _line_of(text, path)
        where = f"{source}:{line}" if line else source
        loc = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in path) or "top level"
        raise InputError(f"{where}: {loc}: {e.message}") from None
    for k, v in enumerate(data["vectors"]):
        if len(v) != data["dim"]:
            line = _line_of(text, ["vectors", k])
            raise InputError(f"{source}:{line}: vectors[{k}] has length {len(v)}, expected {data['dim']}")
    try:
        X = validate(data["vectors"], data["dim"])
    except ValidationError as e:
        raise InputError(f"{source}: {type(e).__name__}: {e}") from None
    return X, data.get("label")


def read_vectorset(path: str) -> tuple[VectorSet, Optional[str], str]:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise InputError(f"{path}: {e.strerror}") from None
    X, label = parse_vectorset_text(text, path)
    return X, label, hashlib.sha256(text.encode()).hexdigest()


def canonical_vectorset(X: VectorSet, label: Optional[str] = None) -> str:
    d: dict[str, Any] = {"dim": X.dim, "vectors": [list(v) for v in X.vectors]}
    if label is not None:
        d["label"] = label
    return json.dumps(d, sort_keys=True, separators=(",", ":"))


# --------------------------------------------------------------------------
# output formatting


def _real(x: float):
    if x is None:
        return None
    if not math.isfinite(x):
        return str(x)
    return float(f"{x:.12g}")


def _frac(x: Fraction) -> str:
    return str(Fraction(x))


def _dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _fixed(x: Optional[float]) -> str:
    return "" if x is None else f"{x:.12f}"


# --------------------------------------------------------------------------
# commands


def cmd_analyze(args, inputs):
    X, label, _ = inputs[0]
    ctx = saturation_context(X)
    eta = X.coplanarity.eta
    out = {
        "label": label,
        "dim": X.dim,
        "vectors": [list(v) for v in X.vectors],
        "alpha": [_frac(a) for a in X.alpha],
        "level_vector": list(X.level_vector),
        "lattice": {"basis": [list(b) for b in X.lattice.basis], "determinant": X.lattice.determinant},
        "eta": [_frac(v) for v in eta] if eta is not None else "not coplanar",
        "extreme_rays": [list(r) for r in X.geometry.extreme_rays],
        "facet_normals": [list(n) for n in X.geometry.facet_normals],
        "delta": _real(X.delta),
        "M": ctx.M,
        "g0": list(ctx.g0),
        "R0": _real(ctx.R0),
        "R0_squared": ctx.R0_sq,
        "fundamental_domain_size": len(ctx.omega_star),
    }
    return _dump_json(out), EXIT_OK


def cmd_frobenius(args, inputs):
    X, label, _ = inputs[0]
    F = frobenius_set(X)
    out = {"label": label, "apexes": [list(a) for a in sorted(F.apexes)]}
    return _dump_json(out), EXIT_OK


def _parse_point(text: str, dim: int):
    try:
        z = [int(v) for v in text.replace(" ", "").split(",") if v != ""]
    except ValueError:
        raise InputError(f"point {text!r} is not a comma-separated list of integers") from None
    if len(z) != dim:
        raise InputError(f"point {text!r} has {len(z)} coordinates, expected {dim}")
    return tuple(z)


def cmd_multiplicity(args, inputs):
    X, _, _ = inputs[0]
    lines = []
    for text in args.point:
        z = _parse_point(text, X.dim)
        lines.append(str(multiplicity(X, None, z)))
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_gamma(args, inputs):
    X, _, _ = inputs[0]
    directions = None
    if args.direction:
        directions = [[float(v) for v in d.split(",")] for d in args.direction]
    elif X.dim == 1:
        directions = [[1.0]]
    if args.points < 1:
        raise InputError("--points must be positive")
    curve = gamma_curve(X, resolution=args.points, directions=directions, k_max=args.kmax, mode=args.mode)
    mode = args.mode
    if mode == "auto":
        mode = "closed" if X.coplanarity.is_coplanar else "empirical"
    head = (["angle"] if directions is None else []) + [f"theta_{i + 1}" for i in range(X.dim)]
    if mode in ("closed", "both"):
        head.append("gamma")
    if mode in ("empirical", "both"):
        head += ["empirical", "residual"]
    buf = io.StringIO()
    buf.write(",".join(head) + "\n")
    for pt in curve:
        row = ([_fixed(pt.angle)] if directions is None else []) + [_fixed(v) for v in pt.theta]
        if mode in ("closed", "both"):
            row.append(_fixed(pt.gamma_closed))
        if mode in ("empirical", "both"):
            row += [_fixed(pt.gamma_empirical), _fixed(pt.residual)]
        buf.write(",".join(row) + "\n")
    return buf.getvalue(), EXIT_OK


def cmd_rigidity(args, inputs):
    if len(inputs) != 2:
        raise InputError("rigidity needs exactly two inputs (-i X -i Y)")
    (X, lx, _), (Y, ly, _) = inputs
    v = same_growth(X, Y, tolerance=args.tolerance, iteration_cap=args.iteration_cap)
    witness = dict(v.witness)
    for key in ("theta",):
        if key in witness:
            witness[key] = [_real(x) for x in witness[key]]
    for key in ("gamma_x", "gamma_y", "gap"):
        if key in witness:
            witness[key] = _real(witness[key])
    if "pairs" in witness:
        witness["pairs"] = [list(p) for p in witness["pairs"]]
    notes = {k: (_real(x) if isinstance(x, float) else x) for k, x in v.notes.items()}
    out = {
        "labels": [lx, ly],
        "equivalent": v.equivalent,
        "c": None if v.c is None else _frac(v.c),
        "witness": witness,
        "notes": notes,
    }
    return _dump_json(out), EXIT_OK if v.equivalent else EXIT_NEGATIVE


COMMANDS = {
    "analyze": cmd_analyze,
    "frobenius": cmd_frobenius,
    "multiplicity": cmd_multiplicity,
    "gamma": cmd_gamma,
    "rigidity": cmd_rigidity,
}


# --------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", action="append", required=True, metavar="PATH",
                        help="vector-set JSON file (give twice for rigidity)")
    common.add_argument("-o", "--output", default="-", metavar="PATH", help="output file (default: stdout)")
    common.add_argument("--kmax", type=int, default=DEFAULT_KMAX, help="empirical horizon (default: %(default)s)")
    common.add_argument("--points", type=int, default=DEFAULT_POINTS,
                        help="interior directions in a planar sweep (default: %(default)s)")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE,
                        help="growth comparison tolerance (default: %(default)s)")
    common.add_argument("--iteration-cap", type=int, default=DEFAULT_ITERATION_CAP,
                        help="largest iterate size m^p (default: %(default)s)")
    common.add_argument("--report", metavar="PATH", help="write a JSON run report (includes wall time)")

    parser = argparse.ArgumentParser(prog="frobnd", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="lattice, cone, coplanarity and saturation data")
    sub.add_parser("frobenius", parents=[common], help="apexes of the maximal saturated cones")
    pm = sub.add_parser("multiplicity", parents=[common], help="exact path count m(z)")
    pm.add_argument("-z", "--point", action="append", required=True, metavar="Z",
                    help="comma-separated integer point (repeatable)")
    pg = sub.add_parser("gamma", parents=[common], help="directional growth curve as CSV")
    pg.add_argument("--mode", choices=["auto", "closed", "empirical", "both"], default="auto")
    pg.add_argument("--direction", action="append", metavar="THETA",
                    help="comma-separated direction (repeatable); replaces the planar sweep")
    sub.add_parser("rigidity", parents=[common], help="compare growth functions of two coplanar sets")
    return parser


def _write(path: str, text: str):
    if path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    t0 = time.perf_counter()
    status, error = EXIT_OK, None
    text = ""
    inputs = []
    try:
        if args.command != "rigidity" and len(args.input) != 1:
            raise InputError(f"{args.command} takes exactly one input")
        inputs = [read_vectorset(p) for p in args.input]
        text, status = COMMANDS[args.command](args, inputs)
    except (InputError, ValidationError, HorizonTooSmall, ValueError) as e:
        status, error = EXIT_USAGE, str(e)
    except (NumericalError, IterationTooLarge) as e:
        status, error = EXIT_NUMERIC, f"{type(e).__name__}: {e}"
    except FrobndError as e:  # pragma: no cover
        status, error = EXIT_NUMERIC, f"{type(e).__name__}: {e}"
    if error is not None:
        sys.stderr.write(f"frobnd {args.command}: {error}\n")
    else:
        _write(args.output, text)
    if args.report:
        report = {
            "command": args.command,
            "inputs": [{"path": p, "sha256": d} for p, (_, _, d) in zip(args.input, inputs)],
            "output": args.output,
            "exit_code": status,
            "error": error,
            "wall_time_s": round(time.perf_counter() - t0, 6),
            "version": __version__,
            "tolerances": {
                "kmax": args.kmax,
                "points": args.points,
                "tolerance": args.tolerance,
                "iteration_cap": args.iteration_cap,
                "newton_residual": "1e-10*(1+|beta|)",
                "interior_margin": 1e-9,
                "tie_rtol": 1e-9,
                "slack_at_kmax": slack(args.kmax) if args.kmax > 1 else None,
            },
        }
        _write(args.report, _dump_json(report))
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
