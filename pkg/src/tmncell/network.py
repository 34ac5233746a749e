"""Mass-flow digraph data model.

A thermodynamical material network (TMN) is a digraph whose vertices are
mass stocks (compartments that store, transform, or use a target material)
and whose arcs are scheduled transfers (compartments that move mass between
two stocks). Masses are exact non-negative integers in milligrams so that
conservation checks compare bit-identical totals instead of floating-point
approximations. Vertex ids occupy 1..n_v and arc ids continue n_v+1..n_c,
so stocks sit on the diagonal of the mass-flow matrix and each arc owns one
off-diagonal cell.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NetworkSpecError

__all__ = [
    "TransferSchedule",
    "VertexCompartment",
    "ArcCompartment",
    "TMNetwork",
    "NetworkState",
    "build_network",
    "load_network",
    "kronecker_delta",
    "mass_flow_matrix",
    "initial_state",
    "total_mass",
]


def kronecker_delta(n: int, n0: int) -> int:
    """Unit impulse: 1 if n == n0 else 0. Schedules fire through this."""
    return 1 if n == n0 else 0


def _check_mass(value: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise NetworkSpecError(f"{what}: mass must be an integer (milligrams), got {value!r}")
    if value < 0:
        raise NetworkSpecError(f"{what}: mass must be non-negative, got {value}")
    return value


def _check_sample_index(value: int, what: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise NetworkSpecError(f"{what}: sample index must be an integer, got {value!r}")
    if value < 0:
        raise NetworkSpecError(f"{what}: sample index must be non-negative, got {value}")
    return value


@dataclass(frozen=True)
class TransferSchedule:
    """One arc's impulse pair: release `amount_mg` at `departs`, absorb at `arrives`.

    The flow pulse produced by the schedule is rectangular: the in-flight
    mass equals amount_mg for samples departs+1 .. arrives and is zero
    elsewhere. Zero-duration transfers (departs == arrives) are rejected.
    """

    amount_mg: int
    departs: int
    arrives: int

    def __post_init__(self):
        _check_mass(self.amount_mg, "schedule amount_mg")
        _check_sample_index(self.departs, "schedule departs")
        _check_sample_index(self.arrives, "schedule arrives")
        if self.departs >= self.arrives:
            raise NetworkSpecError(
                f"schedule must have departs < arrives, got departs={self.departs}, "
                f"arrives={self.arrives}"
            )


@dataclass(frozen=True)
class VertexCompartment:
    """A stock: stores, transforms, or uses the target material."""

    id: int
    label: str
    materials: frozenset[str] = field(default_factory=frozenset)
    initial_stock_mg: int = 0

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, int):
            raise NetworkSpecError(f"vertex id must be an integer, got {self.id!r}")
        _check_mass(self.initial_stock_mg, f"vertex {self.id} initial_stock_mg")
        object.__setattr__(self, "materials", frozenset(self.materials))


@dataclass(frozen=True)
class ArcCompartment:
    """A transfer: moves mass from vertex `tail` to vertex `head` on a schedule."""

    id: int
    tail: int
    head: int
    schedule: TransferSchedule
    materials: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        for name in ("id", "tail", "head"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise NetworkSpecError(f"arc {name} must be an integer, got {v!r}")
        if self.tail == self.head:
            raise NetworkSpecError(f"arc {self.id}: tail and head must differ (self-loops not modeled)")
        object.__setattr__(self, "materials", frozenset(self.materials))


class TMNetwork:
    """Validated mass-flow digraph with schedules and a sample time.

    Immutable after construction. Vertices are stored sorted by id and must
    occupy the contiguous range 1..n_v; arc ids must continue n_v+1..n_c.
    At most one arc per ordered vertex pair: each off-diagonal cell of the
    mass-flow matrix holds a single scalar. `closed` marks the network as
    having no external inflow/outflow, which is what makes the summed
    matrix entries a conserved quantity.
    """

    def __init__(
        self,
        vertices: Iterable[VertexCompartment],
        arcs: Iterable[ArcCompartment],
        sample_time_s: float,
        closed: bool = True,
    ):
        self._vertices = tuple(sorted(vertices, key=lambda v: v.id))
        self._arcs = tuple(sorted(arcs, key=lambda a: a.id))
        if not isinstance(sample_time_s, (int, float)) or isinstance(sample_time_s, bool):
            raise NetworkSpecError(f"sample_time_s must be a number, got {sample_time_s!r}")
        if not math.isfinite(sample_time_s) or sample_time_s <= 0:
            raise NetworkSpecError(f"sample_time_s must be positive and finite, got {sample_time_s}")
        self._sample_time_s = float(sample_time_s)
        self._closed = bool(closed)
        self._validate()
        self._vertex_by_id = {v.id: v for v in self._vertices}
        self._arc_by_id = {a.id: a for a in self._arcs}
        self._arc_by_pair = {(a.tail, a.head): a for a in self._arcs}

    def _validate(self):
        n_v = len(self._vertices)
        if n_v == 0:
            raise NetworkSpecError("network must have at least one vertex")
        vertex_ids = [v.id for v in self._vertices]
        if len(set(vertex_ids)) != n_v:
            dupes = sorted({i for i in vertex_ids if vertex_ids.count(i) > 1})
            raise NetworkSpecError(f"duplicate vertex ids: {dupes}")
        if vertex_ids != list(range(1, n_v + 1)):
            raise NetworkSpecError(
                f"vertex ids must form the contiguous range 1..{n_v}, got {vertex_ids}"
            )
        arc_ids = [a.id for a in self._arcs]
        n_c = n_v + len(arc_ids)
        if len(set(arc_ids)) != len(arc_ids):
            dupes = sorted({i for i in arc_ids if arc_ids.count(i) > 1})
            raise NetworkSpecError(f"duplicate arc ids: {dupes}")
        if arc_ids != list(range(n_v + 1, n_c + 1)):
            raise NetworkSpecError(
                f"arc ids must form the contiguous range {n_v + 1}..{n_c}, got {arc_ids}"
            )
        vertex_set = set(vertex_ids)
        seen_pairs = set()
        for arc in self._arcs:
            for end, name in ((arc.tail, "tail"), (arc.head, "head")):
                if end not in vertex_set:
                    raise NetworkSpecError(f"arc {arc.id}: {name} references missing vertex {end}")
            pair = (arc.tail, arc.head)
            if pair in seen_pairs:
                raise NetworkSpecError(
                    f"duplicate arc for ordered pair {pair}; one arc per pair is supported"
                )
            seen_pairs.add(pair)

    @property
    def vertices(self) -> tuple[VertexCompartment, ...]:
        return self._vertices

    @property
    def arcs(self) -> tuple[ArcCompartment, ...]:
        return self._arcs

    @property
    def sample_time_s(self) -> float:
        return self._sample_time_s

    @property
    def closed(self) -> bool:
        return self._closed

    @property
    def n_vertices(self) -> int:
        return len(self._vertices)

    @property
    def n_arcs(self) -> int:
        return len(self._arcs)

    @property
    def n_compartments(self) -> int:
        return len(self._vertices) + len(self._arcs)

    def vertex(self, vertex_id: int) -> VertexCompartment:
        return self._vertex_by_id[vertex_id]

    def arc(self, arc_id: int) -> ArcCompartment:
        return self._arc_by_id[arc_id]

    def has_vertex(self, vertex_id: int) -> bool:
        return vertex_id in self._vertex_by_id

    def arc_between(self, tail: int, head: int) -> ArcCompartment | None:
        return self._arc_by_pair.get((tail, head))

    def out_arcs(self, vertex_id: int) -> tuple[ArcCompartment, ...]:
        return tuple(a for a in self._arcs if a.tail == vertex_id)

    def in_arcs(self, vertex_id: int) -> tuple[ArcCompartment, ...]:
        return tuple(a for a in self._arcs if a.head == vertex_id)

    def __repr__(self):
        return (
            f"TMNetwork(n_v={self.n_vertices}, n_a={self.n_arcs}, "
            f"T={self._sample_time_s}s, closed={self._closed})"
        )


@dataclass(frozen=True)
class NetworkState:
    """All stock and in-flight masses at one sample index.

    `stocks` maps vertex id -> mg, `flows` maps arc id -> mg. For a closed
    network the sum of both is invariant across the whole trajectory.
    """

    n: int
    stocks: Mapping[int, int]
    flows: Mapping[int, int]


def initial_state(net: TMNetwork) -> NetworkState:
    """State at n = 0: stocks at their initial values, nothing in flight."""
    return NetworkState(
        n=0,
        stocks={v.id: v.initial_stock_mg for v in net.vertices},
        flows={a.id: 0 for a in net.arcs},
    )


def total_mass(state: NetworkState) -> int:
    """Exact total of all stocks plus all in-flight masses, in mg."""
    return sum(state.stocks.values()) + sum(state.flows.values())


def mass_flow_matrix(net: TMNetwork, state: NetworkState) -> np.ndarray:
    """Snapshot the state as the n_v x n_v mass-flow matrix.

    Entry (k, k) is the stock of vertex k; entry (i, j) with i != j is the
    in-flight mass of the arc from i to j if that arc exists, else 0. The
    sparsity pattern therefore equals the digraph adjacency plus the
    diagonal. Values are int64 milligrams.
    """
    expected_vertices = {v.id for v in net.vertices}
    expected_arcs = {a.id for a in net.arcs}
    if set(state.stocks) != expected_vertices or set(state.flows) != expected_arcs:
        raise NetworkSpecError("state does not belong to this network (id sets differ)")
    n_v = net.n_vertices
    out = np.zeros((n_v, n_v), dtype=np.int64)
    for v in net.vertices:
        out[v.id - 1, v.id - 1] = state.stocks[v.id]
    for a in net.arcs:
        out[a.tail - 1, a.head - 1] = state.flows[a.id]
    return out


# --- declarative description / JSON spec ---------------------------------

_TOP_KEYS = {"sample_time_s", "vertices", "arcs"}
_VERTEX_KEYS = {"id", "label", "materials", "initial_stock_mg"}
_ARC_KEYS = {"id", "tail", "head", "amount_mg", "departs", "arrives", "materials"}


def _require_keys(obj: Mapping, required: set[str], where: str) -> None:
    if not isinstance(obj, Mapping):
        raise NetworkSpecError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - required
    if unknown:
        raise NetworkSpecError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise NetworkSpecError(f"{where}: missing required field '{sorted(missing)[0]}'")


def _materials(value, where: str) -> frozenset[str]:
    if not isinstance(value, Sequence) or isinstance(value, (str, bytes)):
        raise NetworkSpecError(f"{where}: materials must be an array of strings")
    for m in value:
        if not isinstance(m, str):
            raise NetworkSpecError(f"{where}: materials must be strings, got {m!r}")
    return frozenset(value)


def build_network(spec: Mapping) -> TMNetwork:
    """Build a validated network from a declarative description.

    `spec` has the same shape as the JSON spec file: sample_time_s, a
    vertices array and an arcs array. Parsing is strict: unknown fields are
    rejected so schedule typos fail loudly instead of silently dropping an
    impulse.
    """
    _require_keys(spec, _TOP_KEYS, "network spec")
    vertices = []
    for idx, v in enumerate(spec["vertices"]):
        where = f"vertices[{idx}]"
        _require_keys(v, _VERTEX_KEYS, where)
        if not isinstance(v["label"], str):
            raise NetworkSpecError(f"{where}: label must be a string")
        vertices.append(
            VertexCompartment(
                id=v["id"],
                label=v["label"],
                materials=_materials(v["materials"], where),
                initial_stock_mg=v["initial_stock_mg"],
            )
        )
    arcs = []
    for idx, a in enumerate(spec["arcs"]):
        where = f"arcs[{idx}]"
        _require_keys(a, _ARC_KEYS, where)
        arcs.append(
            ArcCompartment(
                id=a["id"],
                tail=a["tail"],
                head=a["head"],
                schedule=TransferSchedule(
                    amount_mg=a["amount_mg"], departs=a["departs"], arrives=a["arrives"]
                ),
                materials=_materials(a["materials"], where),
            )
        )
    return TMNetwork(vertices, arcs, spec["sample_time_s"])


def load_network(path: str | Path) -> TMNetwork:
    """Load and validate a network spec JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise NetworkSpecError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return build_network(spec)
