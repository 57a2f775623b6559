"""Command-line front end.

Every command writes CSV (17 significant digits) preceded by ``#`` lines
echoing the run configuration. Exit codes: 0 success, 2 bad input,
3 numerical failure or a violated verdict.
"""
import argparse
import csv
import io
import json
import sys
import warnings
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    BoundaryError,
    DimError,
    FrameError,
    GateNotMet,
    InvalidBody,
    PoleError,
    PreconditionError,
    RangeError,
    ResolutionError,
    SectionLabError,
    SmoothnessError,
)
from .fractional import frac_section, frac_section_fourier
from .geometry.frames import as_directions
from .geometry.metrics import hausdorff_and_l2, radial_metric
from .geometry.mollify import MollifiedBody
from .geometry.quadrature import sphere_area, sphere_grid
from .geometry.specio import load_body
from .harmonics import eigenvalues, expand
from .sections import concavity_residuals, cross_section_body, intersection_body, section_batch, section_derivative
from . import stability

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC = 0, 2, 3
INPUT_ERRORS = (
    InvalidBody,
    DimError,
    FrameError,
    RangeError,
    PoleError,
    PreconditionError,
    SmoothnessError,
    ResolutionError,
    BoundaryError,
)
SERIES_CUTOFF = 1e-13  # relative size below which IK series coefficients are dropped
CHECKS = ("mmo", "main1", "cor1", "main2", "intparallel")
LIST_FLAGS = ("--t", "--xi", "--params")  # values may start with '-'


class InputError(Exception):
    """Bad command-line input (exit 2)."""


def fmt(value):
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _floats(text, name):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InputError(f"{name}: expected comma-separated numbers, got {text!r}") from exc


# -- argument handling -----------------------------------------------------------
def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--body", help="body spec (JSON)")
    common.add_argument("--body2", help="second body spec (JSON)")
    common.add_argument("--xi", help="direction, comma-separated; ';' separates several")
    common.add_argument("--t", help="comma-separated t values")
    common.add_argument("--p", type=float, help="order for fractional derivatives or I_p")
    common.add_argument("--delta", type=float, help="mollify the body(ies) with this delta")
    common.add_argument("--grid-order", type=int, help="sphere quadrature order")
    common.add_argument("--max-degree", type=int, help="harmonic truncation degree")
    common.add_argument("--sweep", help="family name for a parameter sweep")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output CSV (default stdout)")
    common.add_argument("--dim", type=int, help="dimension when no body is given")

    parser = argparse.ArgumentParser(prog="sectionlab", description="Sections of convex bodies and stability checks.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("section", parents=[common], help="parallel section profile A(t)")
    v = sub.add_parser("verify", parents=[common], help="stability checks")
    v.add_argument("--check", choices=CHECKS, default="main1")
    v.add_argument("--params", help="comma-separated sweep parameters")
    sub.add_parser("fracderiv", parents=[common], help="fractional derivative of A at 0")
    sub.add_parser("harmonics", parents=[common], help="I_p eigenvalues, or harmonic coefficients of a body")
    ib = sub.add_parser("ibody", parents=[common], help="intersection body radial function")
    ib.add_argument("--series-out", help="write a radial_series spec of IK")
    sub.add_parser("cbody", parents=[common], help="cross-section body radial function")
    sub.add_parser("metric", parents=[common], help="radial and support distances between two bodies")
    return parser


class Run:
    """Parsed configuration plus lazily loaded bodies."""

    def __init__(self, args):
        self.args = args
        self.config = {k: v for k, v in vars(args).items() if v is not None}

    def body(self, which="body", required=True):
        path = getattr(self.args, which)
        if path is None:
            if required:
                raise InputError(f"--{which} is required for this command")
            return None
        if not Path(path).is_file():
            raise InputError(f"no such body spec: {path}")
        K = load_body(path)
        if self.args.delta is not None:
            K = MollifiedBody(K, self.args.delta)
        return K

    def dim(self, K=None):
        if K is not None:
            return K.dim
        if self.args.dim is None:
            raise InputError("--dim is required when no body is given")
        return self.args.dim

    def directions(self, n, default=None):
        text = self.args.xi
        if text is None:
            if default is None:
                e = np.zeros(n)
                e[-1] = 1.0
                return e[None]
            return default
        rows = [_floats(part, "--xi") for part in text.split(";")]
        if any(len(r) != n for r in rows):
            raise InputError(f"--xi must have {n} components")
        dirs = np.array(rows)
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        return as_directions(dirs, n)

    def grid(self, n, default):
        return sphere_grid(n, self.args.grid_order or default)


# -- commands ---------------------------------------------------------------
def cmd_section(run):
    K = run.body()
    xi = run.directions(K.dim)[0]
    h_plus, h_minus = K.support(xi), K.support(-xi)
    if run.args.t is not None:
        t = np.array(_floats(run.args.t, "--t"))
    else:
        width = h_plus + h_minus
        t = np.linspace(-h_minus + 0.01 * width, h_plus - 0.01 * width, 65)
    quad_sub = sphere_grid(K.dim - 1, run.args.grid_order) if run.args.grid_order and K.dim > 2 else None
    A = section_batch(K, np.broadcast_to(xi, (len(t), K.dim)), t, quad_sub, h_plus, h_minus)
    slopes = []
    for ti in t:
        try:
            slopes.append(section_derivative(K, xi, ti, 1, quad_sub=quad_sub)[0])
        except BoundaryError:
            slopes.append(float("nan"))
    uniform = len(t) > 2 and np.allclose(np.diff(t), t[1] - t[0])
    resid = concavity_residuals(A, K.dim) if uniform else np.full(len(t), np.nan)
    return ["t", "A", "A_prime", "concavity_residual"], list(zip(t, A, slopes, resid)), EXIT_OK


def _report_rows(reports, fit=None):
    records = [r.to_record() for r in reports]
    if fit is not None:
        for rec in records:
            rec["q_fitted"] = fit.slope
            rec["fit_residual"] = fit.residual
    header = []
    for rec in records:
        header += [k for k in rec if k not in header]
    return header, [[rec.get(k) for k in header] for rec in records]


def _sweep_params(run):
    if run.args.params:
        return np.array(_floats(run.args.params, "--params"))
    return np.logspace(-3, -1, 7)


def cmd_verify(run):
    args = run.args
    check = args.check
    warned = []
    if args.sweep:
        if args.sweep not in stability.FAMILIES:
            raise InputError(f"unknown family {args.sweep!r}; choose from {sorted(stability.FAMILIES)}")
        params = _sweep_params(run)
        if check == "main2":
            if args.p is None:
                raise InputError("--p is required for main2")
            result = stability.sweep_main2(params, args.p, run.grid(3, 35), sphere_grid(3, 5), family=args.sweep)
        else:
            n = 2 if args.sweep == "shifted-disk" else 3
            result = stability.sweep_main1(args.sweep, params, run.grid(n, 65 if n == 2 else 9))
        header, rows = _report_rows(result.reports, result.fit)
        header = ["parameter"] + header
        rows = [[s] + row for s, row in zip(result.parameters, rows)]
        return header, rows, EXIT_NUMERIC if result.violated else EXIT_OK

    K = run.body()
    n = K.dim
    quad = run.grid(n, 65 if n == 2 else 9)
    if check == "mmo":
        report = stability.verify_mmo_forward(K, quad)
    elif check == "main1":
        report = stability.verify_main1(K, quad)
    elif check == "cor1":
        report = stability.verify_cor1(K, quad)
    elif check == "intparallel":
        report = stability.verify_lemma_intparallel(K, quad)
    else:
        L = run.body("body2")
        if args.p is None:
            raise InputError("--p is required for main2")
        degree = args.max_degree or 16
        quad = run.grid(n, 2 * degree + 3)
        report = stability.verify_main2(K, L, args.p, quad, sphere_grid(n, 5), max_degree=degree)
    if report.gate_met is False:
        warned.append(f"warning: smallness hypothesis not met (epsilon={report.epsilon:.3e}, gate={report.gate:.3e})")
    for line in warned:
        print(line, file=sys.stderr)
    header, rows = _report_rows([report])
    return header, rows, EXIT_NUMERIC if report.violated else EXIT_OK


def cmd_fracderiv(run):
    K = run.body()
    if run.args.p is None:
        raise InputError("--p is required")
    p = run.args.p
    dirs = run.directions(K.dim)
    direct = np.atleast_1d(frac_section(K, dirs, p))
    degree = run.args.max_degree or 16
    rows = []
    try:
        fourier = frac_section_fourier(K, dirs, p, max_degree=degree)
    except RangeError:
        fourier = [None] * len(dirs)
    for xi, d, f in zip(dirs, direct, fourier):
        rows.append(
            [";".join(fmt(c) for c in xi), d, None if f is None else f.value, None if f is None else f.imag_residual]
        )
    return ["xi", "direct", "fourier", "imag_residual"], rows, EXIT_OK


def cmd_harmonics(run):
    K = run.body(required=False)
    degree = run.args.max_degree if run.args.max_degree is not None else (4 if K is None else 8)
    if K is None:
        n = run.dim()
        if run.args.p is None:
            raise InputError("--p is required for the eigenvalue table")
        lam = eigenvalues(n, run.args.p, degree)
        rows = [[m, complex(v).real, complex(v).imag] for m, v in enumerate(lam)]
        return ["m", "lambda_real", "lambda_imag"], rows, EXIT_OK
    quad = run.grid(K.dim, 2 * degree + 3)
    exp = expand(K.radial_on(quad), quad, degree)
    return ["degree", "index", "real", "imag"], exp.records(), EXIT_OK


def _node_rows(quad, values, extra=None):
    rows = []
    for i, (x, w) in enumerate(zip(quad.nodes, quad.weights)):
        row = list(x) + [w, values[i]]
        if extra is not None:
            row.append(extra[i])
        rows.append(row)
    return rows


def ibody_series(IK, quad, degree):
    """Radial-series spec of a tabulated intersection body."""
    exp = expand(IK.values, quad, degree)
    base = float(exp.blocks[0][0]) / np.sqrt(sphere_area(quad.dim))
    cut = SERIES_CUTOFF * abs(base)
    coeffs = [[m, j, float(c)] for m in range(1, degree + 1) for j, c in enumerate(exp.blocks[m]) if abs(c) > cut]
    return {"type": "radial_series", "dim": quad.dim, "parameters": {"base": base, "coefficients": coeffs}}


def cmd_ibody(run):
    K = run.body()
    n = K.dim
    degree = run.args.max_degree or 12
    quad = run.grid(n, 2 * degree + 3)
    IK = intersection_body(K, quad)
    if run.args.series_out:
        spec = ibody_series(IK, quad, degree)
        Path(run.args.series_out).write_text(json.dumps(spec, indent=2) + "\n")
    header = [f"x{i}" for i in range(n)] + ["weight", "rho_IK"]
    return header, _node_rows(quad, IK.values), EXIT_OK


def cmd_cbody(run):
    K = run.body()
    quad = run.grid(K.dim, 33 if K.dim == 2 else 9)
    CK = cross_section_body(K, quad)
    header = [f"x{i}" for i in range(K.dim)] + ["weight", "rho_CK", "t_star"]
    return header, _node_rows(quad, CK.values, CK.t_star), EXIT_OK


def cmd_metric(run):
    K = run.body()
    L = run.body("body2", required=False)
    if L is None:
        L = K.reflected()
    quad = run.grid(K.dim, 65 if K.dim == 2 else 17)
    rad = radial_metric(K, L, quad)
    hd, l2 = hausdorff_and_l2(K, L, quad)
    return ["radial", "hausdorff", "l2_support", "grid_order"], [[rad.value, hd, l2, quad.order]], EXIT_OK


COMMANDS = {
    "section": cmd_section,
    "verify": cmd_verify,
    "fracderiv": cmd_fracderiv,
    "harmonics": cmd_harmonics,
    "ibody": cmd_ibody,
    "cbody": cmd_cbody,
    "metric": cmd_metric,
}


def render(config, header, rows):
    buf = io.StringIO()
    buf.write(f"# sectionlab {__version__}\n")
    for key in sorted(config):
        buf.write(f"# {key}={config[key]}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _bind_list_values(argv):
    """Attach the token after a list flag with '=', so '--t -0.5,0' parses."""
    out, i = [], 0
    while i < len(argv):
        if argv[i] in LIST_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None):
    parser = build_parser()
    argv = _bind_list_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    run = Run(args)
    np.random.seed(args.seed)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            header, rows, code = COMMANDS[args.command](run)
    except (InputError, *INPUT_ERRORS) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except GateNotMet as exc:
        header, rows = _report_rows([exc.report])
        code = EXIT_OK
    except (SectionLabError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    text = render(run.config, header, rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
