"""Circularity indicators of a mass-flow digraph.

Two scalar indicators summarize how well a cell separates material:

* separation rate r_s - the number of rows of the mass-flow matrix, i.e.
  the vertex count. For a source/processor/D-bin cell layout this is 2+D;
  higher means the cell splits the input into more distinct output flows.
* separation time t_s - the time from when material enters the processor
  vertex to when the last mass leaves it for a bin, in seconds. Lower is
  better; a pass-through cell achieves 0.

A material flow is thermodynamically circular when the digraph admits a
closed walk that starts and ends at a designated compartment with every
compartment on the walk (vertices and arcs alike) processing the queried
material labels. The witness returned is the shortest such walk.
"""

from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from typing import Iterable

from .errors import MissingScheduleError, UnknownVertexError
from .network import TMNetwork

__all__ = [
    "IndicatorReport",
    "separation_rate",
    "separation_time",
    "is_thermodynamically_circular",
    "indicator_report",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IndicatorReport:
    """Flat indicator bundle, the unit of JSON emission."""

    separation_rate: int
    separation_time_s: float
    circular: bool
    witness_cycle: tuple[int, ...] | None

    def to_json_dict(self) -> dict:
        return {
            "r_s": self.separation_rate,
            "t_s_seconds": self.separation_time_s,
            "circular": self.circular,
            "witness_cycle": list(self.witness_cycle) if self.witness_cycle else None,
        }


def separation_rate(net: TMNetwork) -> int:
    """Row count of the mass-flow matrix. Depends on topology only."""
    return net.n_vertices


def separation_time(net: TMNetwork, processor_vertex: int) -> float:
    """Latest processor departure minus processor arrival, in seconds.

    Computed as max over the processor's out-arcs of (departs - arrival)
    times the sample time, where arrival is when the processor's in-arc
    delivers (the earliest, if it has several). A negative result means
    some mass is scheduled to leave before anything arrives; it is
    returned signed and flagged with a warning rather than rejected.
    """
    if not net.has_vertex(processor_vertex):
        raise UnknownVertexError(f"no vertex with id {processor_vertex}")
    in_arcs = net.in_arcs(processor_vertex)
    out_arcs = net.out_arcs(processor_vertex)
    if not in_arcs:
        raise MissingScheduleError(f"vertex {processor_vertex} has no in-arc with a schedule")
    if not out_arcs:
        raise MissingScheduleError(f"vertex {processor_vertex} has no out-arcs with schedules")
    arrival = min(a.schedule.arrives for a in in_arcs)
    t_s = max(a.schedule.departs - arrival for a in out_arcs) * net.sample_time_s
    if t_s < 0:
        logger.warning(
            "separation time for vertex %d is negative (%.6g s): an out-arc departs "
            "before the in-arc arrives", processor_vertex, t_s,
        )
    return t_s


def _processes(materials: frozenset[str], compartment_materials: frozenset[str]) -> bool:
    return materials <= compartment_materials


def is_thermodynamically_circular(
    net: TMNetwork, start: int, materials: Iterable[str] = (),
) -> tuple[bool, tuple[int, ...] | None]:
    """Search the material-filtered digraph for a closed walk through `start`.

    Returns (circular, witness): the witness is the shortest closed walk as
    an alternating vertex/arc id sequence starting and ending at `start`,
    found by BFS, or None when the digraph has no admissible cycle through
    the start vertex. Only compartments whose material set covers every
    queried label participate.
    """
    if not net.has_vertex(start):
        raise UnknownVertexError(f"no vertex with id {start}")
    wanted = frozenset(materials)
    if not _processes(wanted, net.vertex(start).materials):
        return False, None

    admissible_vertex = {
        v.id for v in net.vertices if _processes(wanted, v.materials)
    }
    adjacency: dict[int, list] = {vid: [] for vid in admissible_vertex}
    closing_arcs = []  # admissible arcs back into the start vertex
    for arc in net.arcs:  # ascending arc id: deterministic tie-breaking
        if not _processes(wanted, arc.materials):
            continue
        if arc.tail not in admissible_vertex or arc.head not in admissible_vertex:
            continue
        if arc.head == start:
            closing_arcs.append(arc)
        adjacency[arc.tail].append(arc)
    if not closing_arcs:
        return False, None

    # Shortest admissible path from start to every vertex, then close the
    # walk with the cheapest returning arc.
    parent: dict[int, tuple[int, int]] = {}  # vertex -> (previous vertex, arc id)
    dist = {start: 0}
    queue = deque([start])
    while queue:
        vid = queue.popleft()
        for arc in adjacency[vid]:
            if arc.head not in dist:
                dist[arc.head] = dist[vid] + 1
                parent[arc.head] = (vid, arc.id)
                queue.append(arc.head)

    best = None  # (walk length, closing arc id, tail vertex)
    for arc in closing_arcs:
        if arc.tail in dist:
            cand = (dist[arc.tail] + 1, arc.id, arc.tail)
            if best is None or cand < best:
                best = cand
    if best is None:
        return False, None

    _, closing_id, tail = best
    walk: list[int] = [start, closing_id]
    vid = tail
    while vid != start:
        prev, arc_id = parent[vid]
        walk.append(vid)
        walk.append(arc_id)
        vid = prev
    walk.append(start)
    walk.reverse()
    return True, tuple(walk)


def indicator_report(
    net: TMNetwork,
    processor_vertex: int,
    start: int | None = None,
    materials: Iterable[str] = (),
) -> IndicatorReport:
    """Compute both indicators plus the circularity verdict in one bundle."""
    if start is None:
        start = net.vertices[0].id
    circular, witness = is_thermodynamically_circular(net, start, materials)
    return IndicatorReport(
        separation_rate=separation_rate(net),
        separation_time_s=separation_time(net, processor_vertex),
        circular=circular,
        witness_cycle=witness,
    )
