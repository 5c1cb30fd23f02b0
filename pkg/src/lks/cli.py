"""Command line interface: JSON/CSV pipelines over the service handlers.

Commands read JSON from --in (default stdin) and write to --out (default
stdout). Outputs are deterministic: floats are rendered with 17 significant
digits and identical inputs produce byte-identical bytes. Angles are
radians everywhere; --deg converts orbital-element inputs from degrees.

Exit codes: 0 success, 2 geometric degeneracy, 3 invalid input,
4 numerical failure. Errors are machine-readable JSON on stdout and never
leave partial output files behind.
"""

from __future__ import annotations

import json
import sys

import click
from pydantic import ValidationError

from .errors import DegeneracyError, InvalidStateError, NumericalError, UndefinedAngles
from .serialize import dumps_canonical
from .service import handlers
from .service import schemas as sch

EXIT_DEGENERACY = 2
EXIT_INVALID = 3
EXIT_NUMERICAL = 4


def _fail(code: int, exc: Exception) -> None:
    body = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, UndefinedAngles):
        body["undetermined"] = list(exc.undetermined)
        body["surviving"] = dict(exc.surviving)
    click.echo(dumps_canonical({"error": body}))
    sys.exit(code)


def _read_json(path: str | None) -> dict:
    try:
        if path is None or path == "-":
            return json.loads(sys.stdin.read())
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        _fail(EXIT_INVALID, exc)


def _write_text(text: str, out: str | None) -> None:
    # the text is fully built before any write: no partial files on error
    if out is None or out == "-":
        click.echo(text, nl=not text.endswith("\n"))
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _run(fn, req, out: str | None, render) -> None:
    try:
        resp = fn(req)
    except DegeneracyError as exc:
        _fail(EXIT_DEGENERACY, exc)
    except (InvalidStateError, ValueError) as exc:
        _fail(EXIT_INVALID, exc)
    except NumericalError as exc:
        _fail(EXIT_NUMERICAL, exc)
    render(resp, out)


def _validated(model, payload: dict):
    try:
        return model.model_validate(payload)
    except ValidationError as exc:
        _fail(EXIT_INVALID, exc)


@click.group()
@click.version_option(package_name="lks", prog_name="lks")
def main() -> None:
    """Regularized Kepler transforms, orbit classification and the
    quadrupole Lidov-Kozai secular model."""


@main.command()
@click.option("--to", "to_chart", required=True,
              type=click.Choice(["elements", "cartesian", "ks", "lks"]))
@click.option("--frame", default="KS3", type=click.Choice(["KS1", "KS3"]))
@click.option("--gauge", default="sqrt8S",
              type=click.Choice(["const", "sqrt8S", "mu_over_S"]))
@click.option("--mu", default=1.0, show_default=True)
@click.option("--deg", is_flag=True, help="element angles given in degrees")
@click.option("--tol", default=1e-9, show_default=True,
              help="manifold tolerance for KS input")
@click.option("--in", "in_path", default=None, help="input JSON (default stdin)")
@click.option("--out", default=None, help="output path (default stdout)")
def transform(to_chart, frame, gauge, mu, deg, tol, in_path, out) -> None:
    """Convert a state between charts; reports Gamma, J and M0 residuals.

    Input JSON: {"chart": "elements"|"cartesian"|"ks"|"lks", ...fields}.
    """
    payload = _read_json(in_path)
    req = _validated(sch.TransformRequest, {
        "state": payload, "to": to_chart, "frame": frame, "gauge": gauge,
        "mu": mu, "deg": deg, "manifold_tol": tol})

    def render(resp: sch.TransformResponse, out_path):
        _write_text(dumps_canonical(resp.model_dump(by_alias=True)) + "\n",
                    out_path)

    _run(handlers.transform, req, out, render)


@main.command()
@click.option("--tol", default=1e-8, show_default=True)
@click.option("--in", "in_path", default=None)
@click.option("--out", default=None)
def classify(tol, in_path, out) -> None:
    """Classify an LKS state into the special-orbit taxonomy."""
    payload = _read_json(in_path)
    req = _validated(sch.ClassifyRequest, {"state": payload, "tol": tol})

    def render(resp: sch.ClassifyResponse, out_path):
        _write_text(dumps_canonical(resp.model_dump(by_alias=True,
                                                    exclude_none=True)) + "\n",
                    out_path)

    _run(handlers.classify_state, req, out, render)


def _params_options(fn):
    for dec in reversed([
        click.option("--mu", default=1.0, show_default=True),
        click.option("--mu-p", "mu_p", default=1e-3, show_default=True),
        click.option("--a-p", "a_p", default=20.0, show_default=True),
        click.option("--n-p", "n_p", default=None, type=float,
                     help="perturber mean motion (default: circular two-body)"),
        click.option("--S", "S", default=0.5, show_default=True),
        click.option("--L", "L", default=1.0, show_default=True),
        click.option("--G", "G", default=0.0, show_default=True),
    ]):
        fn = dec(fn)
    return fn


def _params_model(mu, mu_p, a_p, n_p, S, L, G) -> sch.LKParamsModel:
    return sch.LKParamsModel(mu=mu, mu_p=mu_p, a_p=a_p, n_p=n_p, S=S, L=L, G=G)


@main.group()
def lk() -> None:
    """Quadrupole Lidov-Kozai secular model."""


@lk.command()
@_params_options
@click.option("--grid", default="181x91", show_default=True,
              help="lambda x Lambda grid size, NxM")
@click.option("--out", default=None)
def portrait(mu, mu_p, a_p, n_p, S, L, G, grid, out) -> None:
    """Emit the N(lambda, Lambda) grid as CSV (lambda,Lambda,N).

    With --out, the CSV goes to the file and the separatrix metadata to
    stdout as JSON.
    """
    try:
        n_lam, n_Lam = (int(v) for v in grid.lower().split("x"))
    except ValueError as exc:
        _fail(EXIT_INVALID, exc)
    req = _validated(sch.PortraitRequest, {
        "params": _params_model(mu, mu_p, a_p, n_p, S, L, G).model_dump(),
        "n_lambda": n_lam, "n_Lambda": n_Lam})

    def render(resp: sch.PortraitResponse, out_path):
        if out_path:
            _write_text(resp.csv, out_path)
            _write_text(dumps_canonical({
                "separatrix_levels": resp.separatrix_levels,
                "n_rows": resp.n_rows}) + "\n", None)
        else:
            _write_text(resp.csv, None)

    _run(handlers.lk_portrait, req, out, render)


@lk.command()
@_params_options
@click.option("--out", default=None)
def equilibria(mu, mu_p, a_p, n_p, S, L, G, out) -> None:
    """List all secular equilibria with stability and eigenvalues (JSON)."""
    req = _validated(sch.EquilibriaRequest, {
        "params": _params_model(mu, mu_p, a_p, n_p, S, L, G).model_dump()})

    def render(resp: sch.EquilibriaResponse, out_path):
        _write_text(dumps_canonical(resp.model_dump(by_alias=True)) + "\n",
                    out_path)

    _run(handlers.lk_equilibria, req, out, render)


@lk.command()
@_params_options
@click.option("--lambda0", "lam0", required=True, type=float)
@click.option("--Lambda0", "Lam0", required=True, type=float)
@click.option("--tau-span", required=True, type=float)
@click.option("--tol", default=1e-12, show_default=True)
@click.option("--samples", default=512, show_default=True)
@click.option("--out", default=None)
def propagate(mu, mu_p, a_p, n_p, S, L, G, lam0, Lam0, tau_span, tol,
              samples, out) -> None:
    """Integrate the reduced flow; CSV columns tau,lambda,Lambda,N."""
    req = _validated(sch.SecularPropagateRequest, {
        "params": _params_model(mu, mu_p, a_p, n_p, S, L, G).model_dump(),
        "lambda0": lam0, "Lambda0": Lam0, "tau_span": tau_span, "tol": tol,
        "n_samples": samples})

    def render(resp: sch.SecularPropagateResponse, out_path):
        if out_path:
            _write_text(resp.csv, out_path)
            _write_text(dumps_canonical(
                {"relative_drift": resp.relative_drift}) + "\n", None)
        else:
            _write_text(resp.csv, None)

    _run(handlers.lk_propagate, req, out, render)


@lk.command()
@_params_options
@click.option("--samples", default=200, show_default=True,
              help="random action sets for the averaging check")
@click.option("--nodes", default=256, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--averaging-tol", default=1e-10, show_default=True)
@click.option("--oracle-tol", default=0.1, show_default=True)
@click.option("--no-oracle", is_flag=True,
              help="skip the direct-integration comparison")
@click.option("--out", default=None)
def validate(mu, mu_p, a_p, n_p, S, L, G, samples, nodes, seed,
             averaging_tol, oracle_tol, no_oracle, out) -> None:
    """Check the averaging against its closed form and, unless --no-oracle,
    the secular drift against a direct integration. Exits 0 when all
    tolerances are met, 4 otherwise."""
    req = _validated(sch.ValidateRequest, {
        "params": _params_model(mu, mu_p, a_p, n_p, S, L, G).model_dump(),
        "n_samples": samples, "n_nodes": nodes, "seed": seed,
        "averaging_tol": averaging_tol, "oracle_rel_tol": oracle_tol,
        "with_oracle": not no_oracle})

    def render(resp: sch.ValidateResponse, out_path):
        _write_text(dumps_canonical(resp.model_dump()) + "\n", out_path)
        if not resp.passed:
            sys.exit(EXIT_NUMERICAL)

    _run(handlers.lk_validate, req, out, render)


@main.command()
@click.option("--samples", default=256, show_default=True)
@click.option("--mu", default=1.0, show_default=True)
@click.option("--gauge", default="sqrt8S",
              type=click.Choice(["const", "sqrt8S", "mu_over_S"]))
@click.option("--deg", is_flag=True)
@click.option("--in", "in_path", default=None)
@click.option("--out", default=None)
def fibre(samples, mu, gauge, deg, in_path, out) -> None:
    """KS3 plane tracks of an orbit, its quarter-turn fibre twin, and the
    fibre circle of the initial point (CSV). With --out, the Lissajous
    summaries go to stdout as JSON."""
    payload = _read_json(in_path)
    req = _validated(sch.FibreRequest, {
        "state": payload, "n_samples": samples, "mu": mu, "gauge": gauge,
        "deg": deg})

    def render(resp: sch.FibreResponse, out_path):
        meta = {
            "plane03": resp.plane03.model_dump(),
            "plane12": resp.plane12.model_dump(),
            "plane03_rotated": resp.plane03_rotated.model_dump(),
            "plane12_rotated": resp.plane12_rotated.model_dump(),
            "g_sum_change": resp.g_sum_change,
        }
        if out_path:
            _write_text(resp.csv, out_path)
            _write_text(dumps_canonical(meta) + "\n", None)
        else:
            _write_text(resp.csv, None)

    _run(handlers.fibre_tracks, req, out, render)


if __name__ == "__main__":
    main()
