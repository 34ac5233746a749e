"""Discrete-time stepping of a mass-flow network.

Each arc's schedule contributes two unit impulses: at `departs` the amount
leaves the tail stock and becomes in-flight mass on the arc, at `arrives`
it leaves the arc and lands in the head stock. Per step, all impulses
scheduled at that sample fire simultaneously and a vertex sees only their
signed sum. Stock and flow updates move the same integer amount in
opposite directions, so the summed mass of a closed network is conserved
bit-exactly at every sample; a schedule that would drive any stock or
in-flight mass negative aborts instead of clamping.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

from .errors import NegativeMassError, NetworkSpecError, TrajectoryDataError
from .network import NetworkState, TMNetwork, initial_state, total_mass

__all__ = [
    "Trajectory",
    "ConservationReport",
    "step",
    "simulate",
    "conservation_check",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "TrajectoryTable",
]


@dataclass(frozen=True)
class Trajectory:
    """Dense state sequence for n = 0..horizon, in order."""

    network: TMNetwork
    states: tuple[NetworkState, ...]

    @property
    def horizon(self) -> int:
        return len(self.states) - 1


@dataclass(frozen=True)
class ConservationReport:
    constant_total: bool
    total_mg: int


def step(net: TMNetwork, state: NetworkState) -> NetworkState:
    """Advance one sample by firing every impulse scheduled at state.n.

    Raises NegativeMassError (with the offending compartment id and sample
    index) if the net effect of the simultaneous impulses would leave a
    stock or an in-flight mass below zero.
    """
    n = state.n
    stock_delta: dict[int, int] = {}
    flow_delta: dict[int, int] = {}
    for arc in net.arcs:
        sched = arc.schedule
        if n == sched.departs:
            stock_delta[arc.tail] = stock_delta.get(arc.tail, 0) - sched.amount_mg
            flow_delta[arc.id] = flow_delta.get(arc.id, 0) + sched.amount_mg
        if n == sched.arrives:
            flow_delta[arc.id] = flow_delta.get(arc.id, 0) - sched.amount_mg
            stock_delta[arc.head] = stock_delta.get(arc.head, 0) + sched.amount_mg
    if not stock_delta and not flow_delta:
        return NetworkState(n + 1, state.stocks, state.flows)

    stocks = dict(state.stocks)
    for vid, delta in stock_delta.items():
        new = stocks[vid] + delta
        if new < 0:
            raise NegativeMassError(
                vid, n,
                f"impulses at n={n} would drive stock of vertex {vid} to {new} mg",
            )
        stocks[vid] = new
    flows = dict(state.flows)
    for aid, delta in flow_delta.items():
        new = flows[aid] + delta
        if new < 0:
            raise NegativeMassError(
                aid, n,
                f"impulses at n={n} would drive in-flight mass of arc {aid} to {new} mg",
            )
        flows[aid] = new
    return NetworkState(n + 1, stocks, flows)


def simulate(net: TMNetwork, horizon: int) -> Trajectory:
    """Run the network from its initial state for `horizon` samples.

    The horizon must cover every scheduled arrival so no pulse is cut off
    mid-flight. Purely a function of (net, horizon): identical inputs give
    bit-identical trajectories.
    """
    if isinstance(horizon, bool) or not isinstance(horizon, int) or horizon < 0:
        raise NetworkSpecError(f"horizon must be a non-negative integer, got {horizon!r}")
    last_arrival = max((a.schedule.arrives for a in net.arcs), default=0)
    if net.arcs and horizon < last_arrival:
        raise NetworkSpecError(
            f"horizon {horizon} is shorter than the last scheduled arrival ({last_arrival})"
        )
    states = [initial_state(net)]
    for _ in range(horizon):
        states.append(step(net, states[-1]))
    return Trajectory(network=net, states=tuple(states))


def conservation_check(traj: Trajectory) -> ConservationReport:
    """Verify the closed-network identity: summed mass identical at every n.

    Totals are exact integer sums, so any discrepancy indicates an engine
    bug rather than numerical drift.
    """
    if not traj.network.closed:
        raise NetworkSpecError("conservation_check requires a closed network")
    totals = [total_mass(s) for s in traj.states]
    constant = all(t == totals[0] for t in totals)
    return ConservationReport(constant_total=constant, total_mg=totals[0])


# --- CSV emission ----------------------------------------------------------


def _columns(net: TMNetwork) -> tuple[list[str], list[int], list[int]]:
    vertex_ids = [v.id for v in net.vertices]
    arc_ids = [a.id for a in net.arcs]
    header = ["n", "t_s"]
    header += [f"stock_{vid}" for vid in vertex_ids]
    header += [f"flow_{net.arc(aid).tail}_{net.arc(aid).head}" for aid in arc_ids]
    return header, vertex_ids, arc_ids


def write_trajectory_csv(traj: Trajectory, path: str | Path) -> None:
    """Emit one row per sample: n, wall-clock seconds, stocks, then flows.

    Columns are ordered by ascending vertex id then ascending arc id;
    masses are integer milligrams. Output contains no timestamps, so
    rewriting the same trajectory is byte-identical.
    """
    header, vertex_ids, arc_ids = _columns(traj.network)
    sample_time = traj.network.sample_time_s
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for s in traj.states:
            row = [s.n, s.n * sample_time]
            row += [s.stocks[vid] for vid in vertex_ids]
            row += [s.flows[aid] for aid in arc_ids]
            writer.writerow(row)


@dataclass(frozen=True)
class TrajectoryTable:
    """Columnar view of a trajectory CSV, for plotting and inspection."""

    t_seconds: tuple[float, ...]
    stock_series: dict[str, tuple[int, ...]]
    flow_series: dict[str, tuple[int, ...]]


def read_trajectory_csv(path: str | Path) -> TrajectoryTable:
    """Read back a trajectory CSV written by write_trajectory_csv."""
    try:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise TrajectoryDataError(f"cannot read trajectory CSV {path}: {exc}") from exc
    if not rows:
        raise TrajectoryDataError(f"{path}: empty trajectory CSV")
    header, data = rows[0], rows[1:]
    if header[:2] != ["n", "t_s"]:
        raise TrajectoryDataError(f"{path}: not a trajectory CSV (header starts {header[:2]})")
    stock_cols = [(i, name) for i, name in enumerate(header) if name.startswith("stock_")]
    flow_cols = [(i, name) for i, name in enumerate(header) if name.startswith("flow_")]
    try:
        t = tuple(float(r[1]) for r in data)
        stocks = {name: tuple(int(r[i]) for r in data) for i, name in stock_cols}
        flows = {name: tuple(int(r[i]) for r in data) for i, name in flow_cols}
    except (ValueError, IndexError) as exc:
        raise TrajectoryDataError(f"{path}: malformed trajectory row: {exc}") from exc
    return TrajectoryTable(t_seconds=t, stock_series=stocks, flow_series=flows)
