"""Command-line front end.

Subcommands map one-to-one onto the library: simulate (trajectory CSV plus
conservation report), indicators (JSON report and a readable block),
check-circularity (JSON verdict with witness), robot-sim (joint CSV plus
energy audit), demo glucorx (the built-in disassembly scenario) and plot
(SVG charts from a trajectory CSV). Exit codes are stable across commands:
0 success, 1 input error, 2 model-feasibility error. Outputs embed no
timestamps, so rerunning a command on the same inputs reproduces the same
bytes. TMNCELL_LOG=debug|info|quiet controls logging verbosity.
"""

from __future__ import annotations

import json
import logging
import os
from pathlib import Path

import click

from . import __version__
from .circularity import indicator_report, is_thermodynamically_circular
from .errors import FeasibilityError, InputError
from .flow import conservation_check, read_trajectory_csv, simulate, write_trajectory_csv
from .glucorx import run_glucorx
from .network import load_network
from .plotting import write_trajectory_charts
from .robot import (
    JointState,
    energy_audit,
    gravity_compensation,
    integrate,
    load_robot_model,
    sinusoidal_torque,
    write_joint_csv,
    zero_torque,
)

logger = logging.getLogger(__name__)

_LOG_LEVELS = {"debug": logging.DEBUG, "info": logging.INFO, "quiet": logging.ERROR}


def _configure_logging() -> None:
    name = os.environ.get("TMNCELL_LOG", "info").strip().lower()
    level = _LOG_LEVELS.get(name, logging.INFO)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s")


def _out_dir(text: str) -> Path:
    out = Path(text)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")


def _split_materials(text: str | None) -> tuple[str, ...]:
    if not text:
        return ()
    return tuple(part.strip() for part in text.split(",") if part.strip())


@click.group()
@click.version_option(version=__version__, prog_name="tmncell")
def cli() -> None:
    """Simulate material-flow networks and the manipulator serving them."""


@cli.command("simulate")
@click.option("--spec", "spec_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Network spec JSON file.")
@click.option("--horizon", type=int, default=None,
              help="Samples to simulate; defaults to one past the last arrival.")
@click.option("--out", "out_text", default=".", show_default=True,
              help="Output directory.")
def cmd_simulate(spec_path: str, horizon: int | None, out_text: str) -> None:
    """Run a network and write trajectory.csv plus conservation.json."""
    net = load_network(spec_path)
    if horizon is None:
        # one sample past the last arrival impulse, so every pulse has landed
        horizon = max((a.schedule.arrives + 1 for a in net.arcs), default=0)
    trajectory = simulate(net, horizon)
    report = conservation_check(trajectory)
    out = _out_dir(out_text)
    csv_path = out / "trajectory.csv"
    write_trajectory_csv(trajectory, csv_path)
    _write_json(out / "conservation.json",
                {"constant_total": report.constant_total, "total_mg": report.total_mg})
    verdict = "constant" if report.constant_total else "NOT constant"
    click.echo(f"wrote {csv_path} ({len(trajectory.states)} samples); "
               f"total mass {verdict} at {report.total_mg} mg")


@cli.command("indicators")
@click.option("--spec", "spec_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Network spec JSON file.")
@click.option("--processor", type=int, default=2, show_default=True,
              help="Vertex id of the separating processor.")
@click.option("--start", type=int, default=None,
              help="Start vertex for the circularity check; defaults to the first vertex.")
@click.option("--materials", "materials_text", default=None,
              help="Comma-separated material labels the cycle must carry.")
@click.option("--out", "out_text", default=".", show_default=True,
              help="Output directory for indicators.json.")
def cmd_indicators(spec_path: str, processor: int, start: int | None,
                   materials_text: str | None, out_text: str) -> None:
    """Report the separation rate and time plus the circularity verdict."""
    net = load_network(spec_path)
    report = indicator_report(net, processor_vertex=processor, start=start,
                              materials=_split_materials(materials_text))
    out = _out_dir(out_text)
    _write_json(out / "indicators.json", report.to_json_dict())
    click.echo(f"separation rate r_s: {report.separation_rate}")
    click.echo(f"separation time t_s: {report.separation_time_s:g} s")
    click.echo(f"thermodynamically circular: {'yes' if report.circular else 'no'}")
    if report.witness_cycle:
        click.echo("witness cycle: " + " -> ".join(str(c) for c in report.witness_cycle))
    else:
        click.echo("witness cycle: none")


@cli.command("check-circularity")
@click.option("--spec", "spec_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Network spec JSON file.")
@click.option("--start", type=int, required=True,
              help="Vertex the closed walk must pass through.")
@click.option("--materials", "materials_text", default=None,
              help="Comma-separated material labels the cycle must carry.")
def cmd_check_circularity(spec_path: str, start: int, materials_text: str | None) -> None:
    """Print the circularity verdict for one start vertex as JSON."""
    net = load_network(spec_path)
    circular, witness = is_thermodynamically_circular(
        net, start, _split_materials(materials_text))
    click.echo(json.dumps(
        {"circular": circular, "witness_cycle": list(witness) if witness else None},
        indent=2))


def _parse_torque(text: str, model):
    text = text.strip()
    if text == "zero":
        return zero_torque()
    if text == "gravity-comp":
        return gravity_compensation(model)
    if text.startswith("sine:"):
        parts = text[len("sine:"):].split(",")
        if len(parts) != 2:
            raise InputError("--torque sine takes sine:<amplitude>,<frequency_hz>")
        try:
            return sinusoidal_torque(float(parts[0]), float(parts[1]))
        except ValueError as exc:
            raise InputError(f"--torque sine: bad number ({exc})") from exc
    raise InputError(
        f"unknown torque profile {text!r}; expected zero, gravity-comp or sine:<amp>,<freq>")


def _parse_joint_values(text: str | None, dof: int, flag: str) -> list[float]:
    if text is None:
        return [0.0] * dof
    try:
        values = [float(part) for part in text.split(",")]
    except ValueError as exc:
        raise InputError(f"{flag} must be comma-separated numbers") from exc
    if len(values) != dof:
        raise InputError(f"{flag} needs {dof} values, got {len(values)}")
    return values


@cli.command("robot-sim")
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Robot model JSON file.")
@click.option("--dt", type=float, required=True, help="Integration step in seconds.")
@click.option("--duration", type=float, required=True, help="Run length in seconds.")
@click.option("--torque", "torque_text", default="zero", show_default=True,
              help="zero, gravity-comp or sine:<amp>,<freq>.")
@click.option("--q0", "q0_text", default=None,
              help="Initial joint coordinates, comma-separated; defaults to zeros.")
@click.option("--qd0", "qd0_text", default=None,
              help="Initial joint velocities, comma-separated; defaults to zeros.")
@click.option("--rtol", type=float, default=1e-5, show_default=True,
              help="Relative tolerance of the energy audit.")
@click.option("--out", "out_text", default=".", show_default=True,
              help="Output directory.")
def cmd_robot_sim(model_path: str, dt: float, duration: float, torque_text: str,
                  q0_text: str | None, qd0_text: str | None, rtol: float,
                  out_text: str) -> None:
    """Integrate a manipulator and write joint_trajectory.csv plus energy_audit.json."""
    model = load_robot_model(model_path)
    if not dt > 0:
        raise InputError(f"--dt must be positive, got {dt}")
    if duration < dt:
        raise InputError(f"--duration {duration} must cover at least one step of --dt {dt}")
    profile = _parse_torque(torque_text, model)
    initial = JointState(_parse_joint_values(q0_text, model.dof, "--q0"),
                         _parse_joint_values(qd0_text, model.dof, "--qd0"))
    trajectory = integrate(model, initial, profile, dt, duration)
    audit = energy_audit(model, trajectory, rtol=rtol)
    out = _out_dir(out_text)
    csv_path = out / "joint_trajectory.csv"
    write_joint_csv(csv_path, model, trajectory)
    _write_json(out / "energy_audit.json", audit.to_json_dict())
    click.echo(f"wrote {csv_path} ({trajectory.n_samples} samples); "
               f"max power residual {audit.max_residual_w:.3e} W; "
               f"balanced: {'yes' if audit.balanced else 'no'}")


@cli.group("demo")
def demo() -> None:
    """Built-in scenarios."""


@demo.command("glucorx")
@click.option("--out", "out_text", default=".", show_default=True,
              help="Output directory.")
def cmd_demo_glucorx(out_text: str) -> None:
    """Disassembly of two glucose meters: trajectory CSV plus indicator JSON."""
    result = run_glucorx()
    out = _out_dir(out_text)
    csv_path = out / "glucorx_trajectory.csv"
    write_trajectory_csv(result.trajectory, csv_path)
    _write_json(out / "glucorx_indicators.json", result.indicators.to_json_dict())
    report = result.indicators
    click.echo(f"wrote {csv_path} and {out / 'glucorx_indicators.json'}")
    click.echo(f"r_s = {report.separation_rate}, t_s = {report.separation_time_s:g} s, "
               f"total mass {result.conservation.total_mg} mg "
               f"({'constant' if result.conservation.constant_total else 'NOT constant'})")


@cli.command("plot")
@click.option("--csv", "csv_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Trajectory CSV written by simulate or demo.")
@click.option("--out", "out_text", default=".", show_default=True,
              help="Output directory.")
def cmd_plot(csv_path: str, out_text: str) -> None:
    """Render the stocks and flows of a trajectory CSV as two SVG charts."""
    table = read_trajectory_csv(csv_path)
    stocks_path, flows_path = write_trajectory_charts(table, _out_dir(out_text),
                                                      Path(csv_path).stem)
    click.echo(f"wrote {stocks_path} and {flows_path}")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code mapping."""
    _configure_logging()
    try:
        cli.main(args=argv, prog_name="tmncell", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except FeasibilityError as exc:
        click.echo(f"infeasible: {exc}", err=True)
        return 2
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
