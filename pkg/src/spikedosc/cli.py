"""Command-line front end: tables of sums and wavefunctions, Hamiltonian matrices, identity suite.

Tables go to stdout as CSV with 17 significant digits, verification reports
as JSON lines; diagnostics go to stderr. Exit codes: 0 success, 1 failed
verification, 2 invalid input.
"""

from __future__ import annotations

import csv
import math
import sys

import click
import numpy as np

from . import oscillator as osc
from . import sums
from . import verify as ver
from .errors import DomainError, NonConvergenceError, SpikedOscError
from .hyperfun import EvalConfig

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2
METHODS = ("closed", "partial", "contour")


class InvalidInput(click.ClickException):
    exit_code = EXIT_INVALID


def fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return f"{float(v):.17g}"


class Table:
    def __init__(self, header):
        self.header = list(header)
        self.writer = csv.writer(sys.stdout, lineterminator="\n")
        self.writer.writerow(self.header)

    def row(self, values):
        if len(values) != len(self.header):
            raise RuntimeError("row width does not match header")
        self.writer.writerow([fmt(v) for v in values])


def x_grid(x, x_min, x_max, x_steps):
    if x:
        xs = list(x)
    elif x_min is not None and x_max is not None:
        if x_steps < 1:
            raise InvalidInput("--x-steps must be at least 1")
        xs = [float(v) for v in np.linspace(x_min, x_max, x_steps)]
    else:
        raise InvalidInput("give --x or --x-min/--x-max")
    bad = [v for v in xs if not v > 0]
    if bad:
        raise InvalidInput(f"x = {bad[0]:g} is not positive: the series diverges at x = 0")
    return xs


def grid_options(fn):
    fn = click.option("--x-steps", type=int, default=11, show_default=True)(fn)
    fn = click.option("--x-max", type=float)(fn)
    fn = click.option("--x-min", type=float)(fn)
    fn = click.option("--x", "x", type=float, multiple=True, help="Evaluation point (repeatable).")(fn)
    return fn


def model_options(fn):
    fn = click.option("--alpha", type=float, default=2.0, show_default=True)(fn)
    fn = click.option("--lambda", "lam", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--B", "B", type=float, default=1.0, show_default=True)(fn)
    fn = click.option("--A", "A", type=float, default=0.0, show_default=True)(fn)
    return fn


def build_model(A, B, lam, alpha):
    try:
        return osc.OscillatorModel(A=A, B=B, lam=lam, alpha=alpha)
    except DomainError as exc:
        raise InvalidInput(str(exc)) from None


def parse_tolerances(ctx, param, values):
    out = {}
    for item in values:
        name, sep, val = item.partition("=")
        if not sep:
            raise click.BadParameter(f"expected NAME=VAL, got {item!r}")
        try:
            out[name.strip()] = float(val)
        except ValueError:
            raise click.BadParameter(f"tolerance for {name!r} is not a number") from None
    return out


@click.group()
def main():
    """Closed-form sums for the spiked harmonic oscillator perturbation series."""


@main.command("sum")
@click.option("--alpha", type=float, required=True)
@click.option("--gamma", type=float, required=True)
@grid_options
@click.option("--method", type=click.Choice(METHODS), multiple=True,
              help="Evaluators to run (repeatable); default: all that apply.")
@click.option("--cesaro/--no-cesaro", default=True, show_default=True)
@click.option("--max-terms", type=int, default=EvalConfig().max_terms, show_default=True)
@click.option("--c", "c", type=float, default=None, help="Contour abscissa (default max(1, x^2)).")
def cmd_sum(alpha, gamma, x, x_min, x_max, x_steps, method, cesaro, max_terms, c):
    """Evaluate S(alpha, gamma, x) by closed form, partial sums and contour quadrature."""
    xs = x_grid(x, x_min, x_max, x_steps)
    try:
        config = EvalConfig(max_terms=max_terms)
        queries = [sums.SumQuery(alpha, gamma, v) for v in xs]
    except DomainError as exc:
        raise InvalidInput(str(exc)) from None
    if method:
        methods = list(dict.fromkeys(method))
    else:
        even = alpha == math.floor(alpha) and int(alpha) % 2 == 0
        methods = [m for m in METHODS if m != "closed" or even]
    table = Table(["alpha", "gamma", "x", "closed", "partial", "partial_err", "partial_terms",
                   "contour", "contour_err", "strict", "weak", "error"])
    for q in queries:
        res = sums.evaluate_all(q, methods, config, cesaro, c)
        part, cont = res.get("partial"), res.get("contour")
        errors = "; ".join(f"{k[:-6]}: {v}" for k, v in res.items() if k.endswith("_error"))
        verdict = q.verdict
        table.row([q.alpha, q.gamma, q.x, res.get("closed"),
                   part.value if part else None, part.error_estimate if part else None,
                   part.terms_used if part else None,
                   cont.value if cont else None, cont.error_estimate if cont else None,
                   verdict.strict, verdict.weak, errors])


@main.command("contour")
@click.option("--alpha", type=float, required=True)
@click.option("--gamma", type=float, required=True)
@grid_options
@click.option("--c", "c", type=float, default=None, help="Contour abscissa (default max(1, x^2)).")
@click.option("--tolerance", "tol", type=float, default=sums.QuadConfig().tol, show_default=True)
def cmd_contour(alpha, gamma, x, x_min, x_max, x_steps, c, tol):
    """Evaluate S(alpha, gamma, x) by quadrature along the line Re t = c."""
    xs = x_grid(x, x_min, x_max, x_steps)
    try:
        quad = sums.QuadConfig(tol=tol)
        queries = [sums.SumQuery(alpha, gamma, v) for v in xs]
    except DomainError as exc:
        raise InvalidInput(str(exc)) from None
    table = Table(["alpha", "gamma", "x", "c", "contour", "error_estimate", "converged", "error"])
    for q in queries:
        cc = c if c is not None else max(1.0, q.x * q.x)
        try:
            est = sums.contour_sum(q, cc, quad)
            table.row([q.alpha, q.gamma, q.x, cc, est.value, est.error_estimate, est.converged, ""])
        except DomainError as exc:
            raise InvalidInput(str(exc)) from None
        except NonConvergenceError as exc:
            e = exc.estimate
            table.row([q.alpha, q.gamma, q.x, cc, e.value if e else None,
                       e.error_estimate if e else None, False, str(exc)])


@main.command("wavefunction")
@model_options
@grid_options
@click.option("--contour", is_flag=True, help="Use contour quadrature for the series factor.")
def cmd_wavefunction(A, B, lam, alpha, x, x_min, x_max, x_steps, contour):
    """Tabulate psi_0 and the first-order correction psi_0^(1) on an x grid."""
    model = build_model(A, B, lam, alpha)
    xs = x_grid(x, x_min, x_max, x_steps)
    even = alpha == math.floor(alpha) and int(alpha) % 2 == 0
    if not even and not contour:
        raise InvalidInput(f"no closed form for alpha = {alpha:g}; pass --contour")
    if B != 1:
        click.echo("warning: B != 1 uses the closed-form prefactor power of B as given, "
                   "which the direct perturbation sum does not confirm", err=True)
    table = Table(["x", "psi0", "psi1", "lambda_psi1"])
    for v in xs:
        try:
            p1 = osc.first_order_correction(model, v, contour=contour)
        except DomainError as exc:
            raise InvalidInput(str(exc)) from None
        except NonConvergenceError as exc:
            raise click.ClickException(str(exc)) from None
        table.row([v, osc.basis_psi(0, model, v), p1, model.lam * p1])


@main.command("matrix")
@model_options
@click.option("--size", type=int, default=5, show_default=True)
def cmd_matrix(A, B, lam, alpha, size):
    """Print the size x size Hamiltonian matrix in the unperturbed basis."""
    model = build_model(A, B, lam, alpha)
    if size < 1:
        raise InvalidInput("--size must be at least 1")
    try:
        h = np.array([[osc.hamiltonian_element(m, n, model) for n in range(size)]
                      for m in range(size)])
    except SpikedOscError as exc:
        raise InvalidInput(str(exc)) from None
    table = Table([f"n{n}" for n in range(size)])
    for row in h:
        table.row(list(row))
    asym = float(np.max(np.abs(h - h.T)))
    click.echo(f"# symmetry_deviation={fmt(asym)}")


@main.command("verify")
@click.option("--only", multiple=True, help="Identity name to run (repeatable).")
@click.option("--seed", type=int, default=None,
              help=f"Grid seed (default ${ver.SEED_ENV} or {ver.DEFAULT_SEED}).")
@click.option("--tolerance", "tolerances", multiple=True, callback=parse_tolerances,
              metavar="NAME=VAL", help="Override an identity's tolerance (repeatable).")
@click.option("--max-terms", type=int, default=None, help="Term cap for partial-sum identities.")
@click.option("--list", "list_only", is_flag=True, help="List identity names and exit.")
def cmd_verify(only, seed, tolerances, max_terms, list_only):
    """Run the identity suite and print one JSON line per identity."""
    if list_only:
        for ident in ver.IDENTITIES.values():
            click.echo(f"{ident.name}\t{ident.module}\t{ident.description}")
        return
    if max_terms is not None and max_terms < 1:
        raise InvalidInput("--max-terms must be at least 1")
    try:
        reports = ver.run_suite(only or None, seed, tolerances, max_terms)
    except DomainError as exc:
        raise InvalidInput(str(exc)) from None
    for r in reports:
        click.echo(r.to_json())
    failed = [r.identity_name for r in reports if not r.passed]
    click.echo(f"{len(reports) - len(failed)}/{len(reports)} identities passed"
               + (f"; failed: {', '.join(failed)}" if failed else ""), err=True)
    sys.exit(EXIT_FAIL if failed else EXIT_OK)


if __name__ == "__main__":
    main()
