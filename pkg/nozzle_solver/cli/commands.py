from pathlib import Path
from typing import Annotated, Callable, Optional

import pandas as pd
import typer
from rich.console import Console
from rich.table import Table

from nozzle_solver.background import classify_orbit, phase_portrait
from nozzle_solver.cli.config import load_config
from nozzle_solver.cli.models import RunConfig
from nozzle_solver.cli.workflows import (
    background_for,
    hamiltonian_drift,
    raise_on_failure,
    run_critical_length,
    run_linear,
    run_nonlinear,
    run_verify,
)
from nozzle_solver.core.errors import NozzleSolverError
from nozzle_solver.core.logger import set_verbosity, setup_logger
from nozzle_solver.linsolve import mode_profiles_frame, solution_grid_frame
from nozzle_solver.nonlinear import SolutionBundle, diagnostics_json, fields_frame

logger = setup_logger(__name__)
console = Console()

app = typer.Typer(add_completion=False, help="Steady supersonic Euler-Poisson flow in a flat nozzle.")

ConfigOption = Annotated[
    Optional[Path],
    typer.Option("--config", help="Run configuration (key = value lines); the shipped default when omitted"),
]
OutOption = Annotated[Path, typer.Option("--out", help="Directory for CSV, SVG and JSON artifacts")]
SeedOption = Annotated[int, typer.Option("--seed", help="Seed of the randomized forcing and initial guesses")]
VerboseOption = Annotated[bool, typer.Option("--verbose", help="Log at DEBUG level")]

FLOAT_FORMAT = "%.17g"


def _run(action: Callable[[], None]) -> None:
    try:
        action()
    except NozzleSolverError as e:
        logger.error(f"{type(e).__name__}: {str(e)}")
        console.print(f"[bold red]{type(e).__name__}[/bold red]: {e}")
        raise typer.Exit(code=e.exit_code)


def _prepare(config: Optional[Path], out: Path, verbose: bool) -> RunConfig:
    set_verbosity(verbose)
    cfg = load_config(config)
    out.mkdir(parents=True, exist_ok=True)
    return cfg


def _write_csv(cfg: RunConfig, frame: pd.DataFrame, path: Path) -> None:
    if cfg.wants("csv"):
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        logger.info(f"Wrote {path}")


def _table(title: str, rows, columns=("quantity", "value")) -> Table:
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row))
    return table


@app.command()
def background(
    config: ConfigOption = None,
    out: OutOption = Path("out"),
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
):
    """Integrate the background, classify its orbit and draw the phase portrait."""

    def action():
        cfg = _prepare(config, out, verbose)
        bg = background_for(cfg)
        orbit = classify_orbit(cfg.gas)
        _write_csv(cfg, bg.to_frame(), out / "background.csv")
        if cfg.wants("svg"):
            phase_portrait(cfg.gas, out / "phase_portrait.svg")
        console.print(
            _table(
                "Background",
                [
                    ("orbit", orbit.orbit.value),
                    ("E^2/2 - H(rho0)", orbit.discriminant),
                    ("sonic density", cfg.gas.rho_s),
                    ("T_min", bg.t_min),
                    ("T_max", bg.t_max),
                    ("T_*", "-" if bg.t_star is None else bg.t_star),
                    ("eps0", bg.eps0),
                    ("mu0", bg.mu0),
                    ("Hamiltonian drift", hamiltonian_drift(bg)),
                ],
            )
        )

    _run(action)


@app.command("critical-length")
def critical_length_command(
    config: ConfigOption = None,
    out: OutOption = Path("out"),
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
):
    """Print T_max, T_*, the critical length and the weight case it came from."""

    def action():
        cfg = _prepare(config, out, verbose)
        summary = run_critical_length(cfg)
        rc, result = summary.constants, summary.result
        rows = [
            ("T_max", summary.abscissas.t_max),
            ("T_*", "-" if summary.abscissas.t_star is None else summary.abscissas.t_star),
            ("critical length", result.length),
            ("case", result.case.value),
            ("a0", rc.a0),
            ("a1", rc.a1),
            ("a2", rc.a2),
            ("C_*", rc.c_star),
            ("C_flat", rc.c_flat),
        ]
        if result.lambda_peak is not None:
            rows.append(("lambda at supremum", result.lambda_peak))
        console.print(_table("Critical length", rows))
        if summary.accelerating is not None:
            console.print(_table("Accelerating flow", summary.accelerating.itertuples(index=False), ("bound", "length")))
            _write_csv(cfg, summary.accelerating, out / "accelerating_bounds.csv")
        if summary.weight is not None:
            _write_csv(cfg, summary.weight, out / "weight.csv")
            console.print(f"min W = {summary.weight['W'].min():.6g} on [0, {cfg.domain.L:g}]")

    _run(action)


@app.command("solve-linear")
def solve_linear_command(
    config: ConfigOption = None,
    out: OutOption = Path("out"),
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
):
    """Solve one frozen-coefficient problem and report its weighted energy identity."""

    def action():
        cfg = _prepare(config, out, verbose)
        run = run_linear(cfg, seed)
        energy = run.energy
        _write_csv(cfg, mode_profiles_frame(run.solution), out / "linear_modes.csv")
        _write_csv(cfg, solution_grid_frame(run.solution, run.problem.x2), out / "linear_solution.csv")
        rows = [
            ("relative residual", run.solution.residual),
            ("condition estimate", run.condition),
            ("I (forcing)", energy.direct),
            ("J1 + J2 + J3", energy.decomposed),
            ("discrepancy", energy.discrepancy),
            ("estimate ratio", "-" if energy.estimate_ratio is None else energy.estimate_ratio),
        ]
        console.print(_table("Linear solve", rows))

    _run(action)


def _report_bundle(cfg: RunConfig, bundle: SolutionBundle, out: Path, title: str) -> None:
    _write_csv(cfg, fields_frame(bundle), out / "fields.csv")
    if cfg.wants("json"):
        (out / "diagnostics.json").write_bytes(diagnostics_json(bundle))
    d = bundle.diagnostics
    rows = [
        ("iterations", d.iterations),
        ("outer iterations", d.outer_iterations),
        ("potential residual", d.potential_residual),
        ("Poisson closure", d.poisson_residual),
        ("vorticity relation", d.vorticity_residual),
        ("entropy transport", d.transport_residual),
        ("mass-flux drift", d.mass_flux_drift),
        ("max |K|", d.max_pseudo_bernoulli),
        ("supersonic margin", d.supersonic_margin),
        ("background margin", d.background_margin),
    ]
    rows.extend((name, value) for name, value in d.constants.items())
    console.print(_table(title, rows))


@app.command("solve-irrotational")
def solve_irrotational_command(
    config: ConfigOption = None,
    out: OutOption = Path("out"),
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
):
    """Iterate the potential-flow map to its fixed point and export the fields."""

    def action():
        cfg = _prepare(config, out, verbose)
        _report_bundle(cfg, run_nonlinear(cfg, rotational=False), out, "Irrotational solve")

    _run(action)


@app.command("solve-rotational")
def solve_rotational_command(
    config: ConfigOption = None,
    out: OutOption = Path("out"),
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
):
    """Run the nested entropy and potential iterations and export the fields."""

    def action():
        cfg = _prepare(config, out, verbose)
        _report_bundle(cfg, run_nonlinear(cfg, rotational=True), out, "Rotational solve")

    _run(action)


@app.command()
def verify(
    config: ConfigOption = None,
    out: OutOption = Path("out"),
    seed: SeedOption = 0,
    verbose: VerboseOption = False,
):
    """Run the invariant suite and print a pass/fail table."""

    def action():
        cfg = _prepare(config, out, verbose)
        report = run_verify(cfg, seed)
        table = Table(title="Verification")
        for column in ("check", "value", "limit", "result"):
            table.add_column(column)
        for c in report.checks:
            table.add_row(c.name, f"{c.value:.3e}", f"{c.limit:.1e}", "[green]pass[/green]" if c.passed else "[red]FAIL[/red]")
        console.print(table)
        _write_csv(cfg, report.to_frame(), out / "verification.csv")
        raise_on_failure(report)

    _run(action)
