"""Command-line front end.

Every subcommand prints one JSON report (or CSV table) with the normalized
inputs, the results, any warnings raised along the way, and a status.
Exit codes: 0 ok, 1 internal error, 2 invalid input or usage, 4 uncertified
gap search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from fractions import Fraction
from typing import Callable, Sequence

from . import __version__
from .bessel import (
    bessel_i,
    bessel_k,
    bessel_residual,
    invertibility_window,
    window_kernel_conditions,
    wronskian,
)
from .index import (
    GaugeTransformDegrees,
    LimitingConnection,
    SurfacePairTopology,
    asd_dimension,
    chern_weil_action,
    cs_gauge_shift,
    gauge_index_shift,
    gauge_shift_crosscheck,
    glue_index,
    grading,
)
from .knot_oracle import su2_grid_oracle
from .knots import (
    TorusKnot,
    alexander_torus,
    degenerate_alpha_fractions,
    flat_set,
    pillowcase_coords,
)
from .params import DomainError, parse_number
from .spectral import (
    circle_spectrum,
    cone_interp_distortion,
    conformal_distortion,
    gamma_bound,
    oneform_indicial_roots,
    oneform_spectrum_gap,
    scalar_boundary_spectrum,
    select_kappa,
)

EXIT_OK, EXIT_INTERNAL, EXIT_INVALID, EXIT_UNCERTIFIED = 0, 1, 2, 4
SIGNIFICANT_DIGITS = 12


class UsageError(Exception):
    def __init__(self, message: str, usage: str = ""):
        super().__init__(message)
        self.usage = usage


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(message, self.format_usage())


# -- value normalization ---------------------------------------------------


def _round(x: float) -> float | str:
    if not math.isfinite(x):
        return str(x)
    value = float(f"{x:.{SIGNIFICANT_DIGITS}g}")
    return 0.0 if value == 0 else value


def normalize(value):
    """Map results onto JSON types: exact rationals become ``int`` or ``"p/q"``."""
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return value
    if isinstance(value, complex):
        if value.imag == 0:
            return _round(value.real)
        return {"re": _round(value.real), "im": _round(value.imag)}
    if isinstance(value, float):
        return _round(value)
    if isinstance(value, dict):
        return {str(k): normalize(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [normalize(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return normalize(value.item())
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _zeta(root):
    """Reportable value of a root: reals stay real, approximations print as floats."""
    z = root.zeta
    if isinstance(z, complex) and z.imag == 0:
        return z.real
    if isinstance(z, Fraction) and not root.exact:
        return float(z)
    return z


# -- argument types ----------------------------------------------------------


def _number(text: str):
    try:
        return parse_number(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_pair(text: str) -> tuple[int, int]:
    try:
        a, b = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'a,b', got {text!r}") from None
    return a, b


def _number_list(text: str) -> list:
    return [_number(part) for part in text.split(",")]


# -- subcommands -------------------------------------------------------------
# Each handler returns (results, status).


def _root_rows(roots) -> list[dict]:
    rows = []
    for r in roots:
        z = _zeta(r)
        mode = list(r.mode) if isinstance(r.mode, tuple) else [r.mode]
        rows.append({"zeta": z, "mode": mode, "multiplicity": r.multiplicity, "residual": r.residual})
    return rows


def _expanded(roots) -> list:
    return [_zeta(r) for r in roots for _ in range(r.multiplicity)]


def cmd_spectrum(a):
    if a.mode is not None:
        data, roots = oneform_indicial_roots(a.alpha, a.kappa, a.mode)
        return {
            "form_degree": 1,
            "x": data.x,
            "y": data.y,
            "rho": data.rho,
            "coefficients": list(data.coefficients),
            "roots": _expanded(roots),
            "rows": _root_rows(roots),
        }, "ok"
    if a.circle is not None:
        lo, hi = a.circle
        eigen = circle_spectrum(a.alpha, a.kappa, range(lo, hi + 1))
        return {
            "form_degree": 0,
            "circle": [e.imag for e in eigen],
            "rows": [{"m": e.m, "imag": e.imag} for e in eigen],
        }, "ok"
    roots = scalar_boundary_spectrum(a.alpha, a.kappa, a.tau)
    return {
        "form_degree": 0,
        "gamma": gamma_bound(a.alpha),
        "roots": _expanded(roots),
        "rows": _root_rows(roots),
    }, "ok"


def cmd_gap(a):
    w = oneform_spectrum_gap(a.alpha, a.kappa, a.tau, a.search_bound)
    if w.status == "uncertified":
        warnings.warn(f"search bound {w.search_bound} does not certify modes beyond it")
    return {
        "gap": w.status,
        "min_abs_re": w.min_abs_re,
        "argmin_mode": list(w.argmin_mode),
        "search_bound": w.search_bound,
        "tail_certified": w.tail_certified,
        "min_is_global": w.min_is_global,
        "roots_inside": _expanded(w.roots_inside),
        "rows": _root_rows(w.roots_inside),
    }, ("uncertified" if w.status == "uncertified" else "ok")


def cmd_kappa_select(a):
    sel = select_kappa(a.alpha, a.tau, a.degree)
    return {"kappa": sel.kappa, "kappa_ceiling": sel.kappa_ceiling, "certified": sel.certified}, "ok"


def cmd_bessel(a):
    results: dict = {}
    if a.kappa is not None:
        if a.alpha is None:
            raise DomainError("--kappa needs --alpha")
        w = invertibility_window(a.alpha, a.kappa)
        results["window"] = [w.delta_lo, w.delta_hi]
        if a.delta is not None:
            worst = window_kernel_conditions(a.alpha, a.kappa, a.delta)
            results["kernel_trivial"] = worst.kernel_trivial
            results["cokernel_trivial"] = worst.cokernel_trivial
            results["invertible"] = w.contains(a.delta)
            results["endpoint"] = w.is_endpoint(a.delta)
    if a.nu is not None:
        rs = a.r if a.r is not None else [Fraction(1)]
        rows = [
            {
                "r": r,
                "K": bessel_k(a.nu, r),
                "dK": bessel_k(a.nu, r, 1),
                "I": bessel_i(a.nu, r),
                "dI": bessel_i(a.nu, r, 1),
                "wronskian": wronskian(a.nu, r),
            }
            for r in rs
        ]
        results["rows"] = rows
        results["max_residual"] = bessel_residual(a.nu, [float(r) for r in rs])
    if not results:
        raise DomainError("bessel needs --nu or --alpha/--kappa")
    return results, "ok"


def _degrees(a) -> GaugeTransformDegrees | None:
    if a.deg_g is None and a.deg_gk is None:
        return None
    return GaugeTransformDegrees(a.deg_g or 0, a.deg_gk or 0)


def cmd_index(a):
    t = SurfacePairTopology(a.k, a.l, a.b1, a.b2_plus, a.genus)
    dim = asd_dimension(t)
    results: dict = {"asd_dimension": dim}
    if a.glue is not None:
        results["glued_index"] = glue_index(dim, LimitingConnection.of(a.glue))
    d = _degrees(a)
    if d is not None:
        results["gauge_shifted_index"] = gauge_index_shift(dim, d)
        results["crosscheck"] = gauge_shift_crosscheck(d)
    return results, "ok"


def cmd_chern_weil(a):
    results: dict = {"action": chern_weil_action(a.k, a.l, a.alpha, a.self_int)}
    d = _degrees(a)
    if d is not None:
        results["cs_shifted"] = cs_gauge_shift(a.cs, a.alpha, d)
    return results, "ok"


def cmd_grading(a):
    g = grading(a.mu_tilde)
    results: dict = {"mu_tilde": g.mu_tilde, "mu_mod4": g.mu_mod4}
    d = _degrees(a)
    if d is not None:
        shifted = grading(gauge_index_shift(a.mu_tilde, d))
        results["shifted_mu_tilde"] = shifted.mu_tilde
        results["shifted_mu_mod4"] = shifted.mu_mod4
    return results, "ok"


def cmd_flat(a):
    K = TorusKnot(*a.knot)
    rows = []
    for c in flat_set(K, a.alpha):
        x, y = pillowcase_coords(c, K)
        rows.append({
            "kind": c.kind.value,
            "label": list(c.rotation_data) if c.rotation_data else None,
            "phi": c.phi,
            "x": x,
            "y": y,
            "isolated": c.isolated,
            "relation_error": c.relation_error,
            "trace_error": c.trace_error,
        })
    results: dict = {"count_irreducible": len(rows) - 1, "rows": rows}
    if a.oracle:
        found = su2_grid_oracle(K, a.alpha)
        results["oracle_count"] = len(found)
        results["oracle_max_error"] = max(
            (max(s.relation_error, s.trace_error) for s in found), default=0.0
        )
    return results, "ok"


def cmd_alexander(a):
    K = TorusKnot(*a.knot)
    return {
        "coefficients": list(alexander_torus(K).coefficients),
        "degenerate_alphas": degenerate_alpha_fractions(K),
    }, "ok"


def cmd_distortion(a):
    if a.kappa_prime is not None:
        return {"bound": cone_interp_distortion(a.kappa, a.kappa_prime).value}, "ok"
    if a.alpha is None:
        raise DomainError("distortion needs --alpha or --kappa-prime")
    return {"bound": conformal_distortion(a.alpha, a.kappa).value}, "ok"


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="singcon", description="Singular-connection toolkit.")
    parser.add_argument("--version", action="version", version=__version__)
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", metavar="FILE")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, handler: Callable, help: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, parents=[common], help=help)
        p.set_defaults(handler=handler)
        return p

    p = add("spectrum", cmd_spectrum, "indicial roots of the scalar or 1-form model")
    p.add_argument("--alpha", type=_number, required=True)
    p.add_argument("--kappa", type=_number, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--tau", type=_number, help="scalar roots with |zeta| < tau")
    g.add_argument("--mode", type=_int_pair, help="1-form quartic roots for modes m1,m2")
    g.add_argument("--circle", type=_int_pair, help="circle eigenvalues for m in lo..hi")

    p = add("gap", cmd_gap, "certify a root-free strip for the 1-form model")
    p.add_argument("--alpha", type=_number, required=True)
    p.add_argument("--kappa", type=_number, required=True)
    p.add_argument("--tau", type=_number, required=True)
    p.add_argument("--search-bound", type=int)

    p = add("kappa-select", cmd_kappa_select, "smallest cone parameter clearing a strip")
    p.add_argument("--alpha", type=_number, required=True)
    p.add_argument("--tau", type=_number, required=True)
    p.add_argument("--degree", type=int, choices=(0, 1), default=0)

    p = add("bessel", cmd_bessel, "Bessel model: invertibility window and K/I values")
    p.add_argument("--alpha", type=_number)
    p.add_argument("--kappa", type=_number)
    p.add_argument("--delta", type=_number)
    p.add_argument("--nu", type=_number)
    p.add_argument("--r", type=_number_list, help="comma-separated radii")

    for name, handler, help in (
        ("index", cmd_index, "formal dimension and index shifts"),
        ("chern-weil", cmd_chern_weil, "Chern-Weil action and Chern-Simons gauge shift"),
    ):
        p = add(name, handler, help)
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--l", type=int, required=True)
        if name == "index":
            p.add_argument("--b1", type=int, default=0)
            p.add_argument("--b2-plus", type=int, default=0)
            p.add_argument("--genus", type=int, default=0)
            p.add_argument("--glue", choices=("abelian", "irreducible"))
        else:
            p.add_argument("--alpha", type=_number, required=True)
            p.add_argument("--self-int", type=int, default=0)
            p.add_argument("--cs", type=_number, default=Fraction(0))
        p.add_argument("--deg-g", type=int)
        p.add_argument("--deg-gk", type=int)

    p = add("grading", cmd_grading, "mod 4 grading, optionally after a gauge shift")
    p.add_argument("--mu-tilde", type=int, required=True)
    p.add_argument("--deg-g", type=int)
    p.add_argument("--deg-gk", type=int)

    p = add("flat", cmd_flat, "flat SU(2) classes on a torus knot complement")
    p.add_argument("--knot", type=_int_pair, required=True)
    p.add_argument("--alpha", type=_number, required=True)
    p.add_argument("--oracle", action="store_true", help="also run the brute-force grid search")

    p = add("alexander", cmd_alexander, "Alexander polynomial and degenerate holonomies")
    p.add_argument("--knot", type=_int_pair, required=True)

    p = add("distortion", cmd_distortion, "conformal distortion bounds")
    p.add_argument("--alpha", type=_number)
    p.add_argument("--kappa", type=_number, required=True)
    p.add_argument("--kappa-prime", type=_number)
    return parser


_NOT_INPUTS = {"handler", "command", "format", "out"}


def _inputs(args: argparse.Namespace) -> dict:
    items = {k: v for k, v in vars(args).items() if k not in _NOT_INPUTS and v is not None}
    inexact = sorted(k for k, v in items.items() if isinstance(v, float) or (
        isinstance(v, list) and any(isinstance(x, float) for x in v)
    ))
    out = {k: list(v) if isinstance(v, tuple) else v for k, v in items.items()}
    out["inexact"] = inexact
    return out


def argv_from_inputs(command: str, inputs: dict) -> list[str]:
    """Rebuild a command line from a report's ``inputs`` block."""
    argv = [command]
    for key, value in sorted(inputs.items()):
        if key == "inexact" or value is False:
            continue
        flag = "--" + key.replace("_", "-")
        if value is True:
            argv.append(flag)
        elif isinstance(value, list):
            argv.append(f"{flag}={','.join(str(v) for v in value)}")
        else:
            argv.append(f"{flag}={value}")
    return argv


# -- output ------------------------------------------------------------------


def _report(command: str, inputs: dict, results: dict, caught: list, status: str) -> dict:
    messages: list[str] = []
    for w in caught:
        text = str(w.message)
        if text not in messages:
            messages.append(text)
    return normalize({
        "tool_version": __version__,
        "command": command,
        "inputs": inputs,
        "results": results,
        "warnings": messages,
        "status": status,
    })


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _cell(value) -> str:
    return value if isinstance(value, str) else json.dumps(value, sort_keys=True)


def to_csv(report: dict) -> str:
    """One row per root or class; scalar results form a single row."""
    results = report["results"]
    rows = results.get("rows")
    if rows is None:
        rows = [{k: v for k, v in results.items()}]
    header = sorted({key for row in rows for key in row})
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(row.get(key)) for key in header])
    return buf.getvalue()


def _emit(text: str, out: str | None, stream) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        stream.write(text)


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv and not argv[0].startswith("-") else ""

    def fail(code: int, message: str, inputs: dict | None = None, usage: str = "") -> int:
        if usage:
            stderr.write(usage)
        report = _report(command, inputs or {}, {"error": message}, [], "error")
        stderr.write(to_json(report))
        return code

    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        return fail(EXIT_INVALID, str(exc), usage=exc.usage)
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0)

    inputs = _inputs(args)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            results, status = args.handler(args)
        except DomainError as exc:
            return fail(EXIT_INVALID, str(exc), inputs)
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            return fail(EXIT_INTERNAL, f"{type(exc).__name__}: {exc}", inputs)

    report = _report(args.command, inputs, results, caught, status)
    text = to_csv(report) if args.format == "csv" else to_json(report)
    _emit(text, args.out, stdout)
    return EXIT_UNCERTIFIED if status == "uncertified" else EXIT_OK


def main() -> None:
    sys.exit(run())
