"""Command-line front end: evaluate functions, sweep grids, dump series
coefficients, check integral identities, build p,q-binomial distribution
files, and run the self-check suites.

All numeric logic lives in the library modules; the commands only parse
arguments, dispatch, and serialize.  Floats are rendered with 17
significant digits so every emitted value round-trips bit-exactly.
"""

from __future__ import annotations

import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import click

from . import branches, calculus, core, pqbinom, selfcheck, series

EXIT_DOMAIN = 2


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def _emit_records(records, fieldnames, fmt, out):
    if fmt == "csv":
        out.write(",".join(fieldnames) + "\n")
        for rec in records:
            out.write(",".join(_fmt(rec.get(k, "")) for k in fieldnames) + "\n")
    else:
        for rec in records:
            parts = []
            for k in fieldnames:
                v = rec.get(k, None)
                if v is None or v == "":
                    parts.append(f'"{k}": null')
                elif isinstance(v, float):
                    parts.append(f'"{k}": {_fmt(v)}')
                elif isinstance(v, (int, bool)):
                    parts.append(f'"{k}": {json.dumps(v)}')
                else:
                    parts.append(f'"{k}": {json.dumps(str(v))}')
            out.write("{" + ", ".join(parts) + "}\n")


def _parse_a(text: str) -> core.AsymmetryParam:
    text = text.strip()
    if "/" in text:
        num, den = text.split("/", 1)
        return core.AsymmetryParam.from_rational(int(num), int(den))
    return core.AsymmetryParam(float(text))


def _die_domain(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_DOMAIN)


@click.group()
def main():
    """Inverse branches of sinh(a*w)*exp(w), their transition function,
    and p,q-binomial distribution tools."""


_EVAL_FUNCTIONS = ("f", "psi", "psi0", "psi1", "omega", "omega_n", "W0", "Wm1")


def _resolve_branch(function, branch_name):
    """Map a function name plus optional --branch to a concrete function."""
    if function == "psi":
        if branch_name is None:
            raise core.DomainError("function 'psi' requires --branch")
        return "psi0" if branch_name == "principal" else "psi1"
    if branch_name is not None:
        want = "principal" if function in ("psi0", "W0") else "lower"
        if function in ("psi0", "psi1", "W0", "Wm1") and branch_name != want:
            raise core.DomainError(
                f"--branch {branch_name} contradicts function {function}")
    return function


@main.command("eval")
@click.argument("function", type=click.Choice(_EVAL_FUNCTIONS))
@click.option("--a", "a_text", default=None, help="asymmetry, decimal or exact 'num/den'")
@click.option("--x", type=float, default=None, help="abscissa for f/psi0/psi1/W0/Wm1 (w for f)")
@click.option("--z", type=float, default=None, help="argument for omega/omega_n")
@click.option("--n", "n_value", type=int, default=None, help="sequence length for omega_n")
@click.option("--branch", "branch_name", type=click.Choice(["principal", "lower"]),
              default=None, help="branch selector for the generic 'psi'")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def cmd_eval(function, a_text, x, z, n_value, branch_name, fmt):
    """Evaluate one function value with a residual diagnostic."""
    try:
        function = _resolve_branch(function, branch_name)
        rec = {"function": function}
        if function in ("W0", "Wm1"):
            if x is None:
                raise core.DomainError("--x is required")
            branch = core.BranchId.PRINCIPAL if function == "W0" else core.BranchId.LOWER
            value = core.lambert_w(branch, x)
            rec.update(x=x, value=value,
                       residual=abs(value * math.exp(value) - x))
        else:
            if a_text is None:
                raise core.DomainError("--a is required")
            a = _parse_a(a_text)
            rec["a"] = a.a
            if function == "f":
                if x is None:
                    raise core.DomainError("--x (the argument w) is required")
                rec.update(x=x, value=core.forward(a, x))
            elif function in ("psi0", "psi1"):
                if x is None:
                    raise core.DomainError("--x is required")
                branch = core.BranchId.PRINCIPAL if function == "psi0" else core.BranchId.LOWER
                # exact rationals dispatch to the closed forms
                if branches.ClosedFormTag.classify(a) is not branches.ClosedFormTag.NONE:
                    value = branches.psi_closed_form(a, branch, x)
                else:
                    value = branches.psi(a, branch, x)
                rec.update(x=x, value=value,
                           residual=abs(core.forward(a, value) - x))
            elif function == "omega":
                if z is None:
                    raise core.DomainError("--z is required")
                tag = branches.ClosedFormTag.classify(a)
                if tag in (branches.ClosedFormTag.A13, branches.ClosedFormTag.A12,
                           branches.ClosedFormTag.A15):
                    value = branches.omega_closed_form(a, z)
                else:
                    value = branches.omega(a, z)
                if a.a > 0.0:
                    res = abs(core.forward(a, value) - core.forward(a, z))
                else:
                    res = abs(value * math.exp(value) - z * math.exp(z))
                rec.update(z=z, value=value, residual=res)
            else:  # omega_n
                if z is None or n_value is None:
                    raise core.DomainError("--z and --n are required")
                value = branches.omega_finite_n(n_value, a, z)
                params = pqbinom.PqParams.from_transition(n_value, a, z, value)
                k = round(n_value * (1.0 - a.a) / 2.0)
                rec.update(n=n_value, z=z, value=value,
                           residual=abs(pqbinom.equal_ratio_residual(params, k)))
        _emit_records([rec], list(rec.keys()), fmt, sys.stdout)
    except core.DomainError as exc:
        _die_domain(str(exc))


def _sweep_grid(lo, hi, count, scale):
    if scale == "linear":
        return [lo + (hi - lo) * i / (count - 1) for i in range(count)] if count > 1 else [lo]
    if lo == 0.0 or hi == 0.0 or (lo < 0.0) != (hi < 0.0):
        raise core.DomainError("log scale requires nonzero endpoints of equal sign")
    sgn = -1.0 if lo < 0.0 else 1.0
    la, lb = math.log(abs(lo)), math.log(abs(hi))
    if count == 1:
        return [lo]
    return [sgn * math.exp(la + (lb - la) * i / (count - 1)) for i in range(count)]


@main.command("sweep")
@click.argument("function", type=click.Choice(("f", "psi", "psi0", "psi1", "omega",
                                               "W0", "Wm1")))
@click.option("--a", "a_text", default=None)
@click.option("--lo", type=float, required=True)
@click.option("--hi", type=float, required=True)
@click.option("--count", type=int, default=101)
@click.option("--scale", type=click.Choice(["linear", "log"]), default="linear")
@click.option("--branch", "branch_name", type=click.Choice(["principal", "lower"]),
              default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@click.option("--out", type=click.Path(writable=True), default=None)
def cmd_sweep(function, a_text, lo, hi, count, scale, branch_name, fmt, out):
    """Evaluate a function on a grid; domain violations flag the row."""
    try:
        function = _resolve_branch(function, branch_name)
    except core.DomainError as exc:
        _die_domain(str(exc))
    if not lo < hi:
        _die_domain(f"requires lo < hi, got {lo} >= {hi}")
    if not 1 <= count <= 10_000_000:
        _die_domain(f"count must be in [1, 1e7], got {count}")
    needs_a = function not in ("W0", "Wm1")
    if needs_a and a_text is None:
        _die_domain("--a is required for this function")
    a = _parse_a(a_text) if needs_a else None
    tag = branches.ClosedFormTag.classify(a) if needs_a else branches.ClosedFormTag.NONE
    with_closed = (function == "omega"
                   and tag in (branches.ClosedFormTag.A13, branches.ClosedFormTag.A12,
                               branches.ClosedFormTag.A15))
    input_name = {"f": "w", "psi0": "x", "psi1": "x", "omega": "z",
                  "W0": "x", "Wm1": "x"}[function]

    def evaluate(t):
        try:
            if function == "f":
                return {"value": core.forward(a, t), "status": "ok"}
            if function == "psi0":
                return {"value": branches.psi(a, core.BranchId.PRINCIPAL, t), "status": "ok"}
            if function == "psi1":
                return {"value": branches.psi(a, core.BranchId.LOWER, t), "status": "ok"}
            if function == "omega":
                rec = {"value": branches.omega(a, t), "status": "ok"}
                if with_closed:
                    rec["closed_form"] = branches.omega_closed_form(a, t)
                return rec
            branch = core.BranchId.PRINCIPAL if function == "W0" else core.BranchId.LOWER
            return {"value": core.lambert_w(branch, t), "status": "ok"}
        except (core.DomainError, core.RangeError) as exc:
            return {"value": "", "status": f"domain_error: {exc}"}

    try:
        grid = _sweep_grid(lo, hi, count, scale)
    except core.DomainError as exc:
        _die_domain(str(exc))
    threads = int(os.environ.get("PQLAMBERT_THREADS", "1") or "1")
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads > 1 and count > 256:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(evaluate, grid))
    else:
        results = [evaluate(t) for t in grid]
    records = [{input_name: t, **res} for t, res in zip(grid, results)]
    fieldnames = [input_name, "value"] + (["closed_form"] if with_closed else []) + ["status"]
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            _emit_records(records, fieldnames, fmt, fh)
    else:
        _emit_records(records, fieldnames, fmt, sys.stdout)


@main.command("series")
@click.option("--a", "a_text", required=True)
@click.option("--kind", type=click.Choice(["taylor", "branch-psi0", "branch-psi1",
                                           "branch-omega", "asym-psi0", "asym-psi1"]),
              default="taylor")
@click.option("--order", type=int, default=10)
@click.option("--terms", type=int, default=None,
              help="truncation order for the asym-* kinds (alias of --order)")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def cmd_series(a_text, kind, order, terms, fmt):
    """Print expansion coefficients (index, exponent, coefficient)."""
    try:
        a = _parse_a(a_text)
        if kind == "taylor":
            exp_step, exp_name = 1.0, "x"
            coeffs = series.taylor_at_zero(a, order).coeffs
        elif kind.startswith("branch-"):
            which = kind.split("-", 1)[1]
            se = series.branch_point_series(a, which, order)
            coeffs = se.coeffs
            exp_step = 0.5 if which in ("psi0", "psi1") else 1.0
            exp_name = "t" if which in ("psi0", "psi1") else "u"
        else:
            # tail coefficients of log(2|x|)/(1 -+ a) + sum c_k V^k, where V is
            # the large/small argument power variable of each branch
            nterms = terms if terms is not None else min(order, 4)
            exp_step, exp_name = 1.0, "Y" if kind == "asym-psi0" else "Z"
            coeffs = series.asymptotic_tail_coeffs(
                a, "psi0" if kind == "asym-psi0" else "psi1", nterms)
        records = [{"index": i + 1, "variable": exp_name,
                    "exponent": exp_step * (i + 1), "coefficient": c}
                   for i, c in enumerate(coeffs)]
        _emit_records(records, ["index", "variable", "exponent", "coefficient"],
                      fmt, sys.stdout)
    except (core.DomainError, ValueError) as exc:
        _die_domain(str(exc))


@main.command("integrate")
@click.option("--a", "a_text", required=True)
@click.option("--target", type=click.Choice(["omega", "psi0", "psi1"]), default="omega")
@click.option("--rel-tol", type=float, default=1e-6)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def cmd_integrate(a_text, target, rel_tol, fmt):
    """Closed-form integral, quadrature value, and their difference."""
    try:
        a = _parse_a(a_text)
        if target == "omega":
            closed = calculus.integral_omega(a)
            quadv = calculus.integral_omega_quadrature(a, rel_tol)
        else:
            branch = core.BranchId.PRINCIPAL if target == "psi0" else core.BranchId.LOWER
            closed = calculus.integral_psi(a, branch)
            quadv = calculus.integral_psi_quadrature(a, branch, max(rel_tol, 1e-10))
        rec = {"target": target, "a": a.a, "closed_form": closed,
               "quadrature": quadv, "difference": abs(closed - quadv)}
        _emit_records([rec], list(rec.keys()), fmt, sys.stdout)
    except core.AccuracyError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except core.DomainError as exc:
        _die_domain(str(exc))


@main.command("pqdist")
@click.option("--n", "n_value", type=int, required=True)
@click.option("--a", "a_text", default=None)
@click.option("--z", type=float, default=None)
@click.option("--p", type=float, default=None)
@click.option("--q", type=float, default=None)
@click.option("--out", type=click.Path(writable=True), required=True)
def cmd_pqdist(n_value, a_text, z, p, q, out):
    """Write the distribution as CSV plus a JSON sidecar with peak data."""
    try:
        sidecar: dict = {"n": n_value}
        if p is not None or q is not None:
            if p is None or q is None or a_text is not None or z is not None:
                raise core.DomainError("give either --p and --q, or --a and --z")
            params = pqbinom.PqParams(n=n_value, p=p, q=q)
            sidecar.update(a=None, z=None, y_omega=None, omega_bar=None)
        else:
            if a_text is None or z is None:
                raise core.DomainError("give either --p and --q, or --a and --z")
            a = _parse_a(a_text)
            y = branches.omega(a, z)
            params = pqbinom.PqParams.from_transition(n_value, a, z, y)
            sidecar.update(a=a.a, z=z, y_omega=y,
                           omega_bar=branches.omega_finite_n(n_value, a, z))
        dist = pqbinom.build_distribution(params)
        masses = dist.masses()
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write("k,k_over_n,mass,log_coeff\n")
            for k in range(n_value + 1):
                fh.write(f"{k},{_fmt(k / n_value)},{_fmt(float(masses[k]))},"
                         f"{_fmt(float(dist.log_coeffs[k]))}\n")
        sidecar.update(p=params.p, q=params.q, peaks=list(dist.peaks),
                       log_norm=dist.log_norm)
        root, ext = os.path.splitext(out)
        sidecar_path = (root + ".json") if ext.lower() == ".csv" else (out + ".json")
        with open(sidecar_path, "w", encoding="utf-8") as fh:
            json.dump(sidecar, fh, indent=2)
            fh.write("\n")
        click.echo(f"wrote {out} and {sidecar_path}")
    except OSError as exc:
        click.echo(f"error: I/O failure for {out}: {exc}", err=True)
        sys.exit(1)
    except core.DomainError as exc:
        _die_domain(str(exc))


@main.command("envelope")
@click.option("--a", "a_text", required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def cmd_envelope(a_text, fmt):
    """Exploratory envelope diagnostics: the rigorous threshold plus rough
    empirical crossover estimates (not contractual)."""
    try:
        a = _parse_a(a_text)
        rec = {"a": a.a, **series.envelope_crossover_estimates(a)}
        _emit_records([rec], list(rec.keys()), fmt, sys.stdout)
    except core.DomainError as exc:
        _die_domain(str(exc))


@main.command("selfcheck")
@click.option("--level", type=click.Choice(["fast", "full"]), default="fast")
def cmd_selfcheck(level):
    """Run the identity suites; exit 0 only if every suite passes."""
    results = selfcheck.run_selfcheck(level)
    for r in results:
        click.echo(r.line())
    failed = [r for r in results if not r.passed]
    click.echo(f"{len(results) - len(failed)}/{len(results)} suites passed")
    sys.exit(1 if failed else 0)


if __name__ == "__main__":
    main()
