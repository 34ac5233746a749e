"""Kinematic chain description and inertial-parameter validation.

A manipulator is an ordered list of links, each carrying standard (distal)
Denavit-Hartenberg parameters and aggregate inertial data: mass, centre of
mass in the link frame, and the 3x3 inertia tensor about that centre of
mass expressed in the link frame. Volume integrals never appear; links are
specified directly by these aggregates. An optional rotor term per joint
adds gear_ratio^2 * rotor_inertia to the matching inertia-matrix diagonal;
motor centre-of-mass positions are not modeled, so rotors contribute
kinetic energy only (no potential term).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, NamedTuple, Sequence

import numpy as np

from ..errors import RobotModelError

__all__ = [
    "REVOLUTE",
    "PRISMATIC",
    "DHLink",
    "LinkInertia",
    "RobotModel",
    "JointState",
    "ModelArrays",
    "robot_model_from_dict",
    "load_robot_model",
]

REVOLUTE = "revolute"
PRISMATIC = "prismatic"

_SYM_TOL = 1e-9
_EIG_TOL = 1e-9


def _num(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise RobotModelError(f"{where}: expected a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise RobotModelError(f"{where}: must be finite, got {value}")
    return value


def _vec(value, size: int, where: str) -> tuple[float, ...]:
    if not isinstance(value, Sequence) or isinstance(value, (str, bytes)) or len(value) != size:
        raise RobotModelError(f"{where}: expected an array of {size} numbers")
    return tuple(_num(v, where) for v in value)


@dataclass(frozen=True)
class DHLink:
    """Standard DH parameters for one link; `kind` picks the joint variable.

    A revolute joint adds q to theta_offset; a prismatic joint adds q to d.
    """

    a: float
    alpha: float
    d: float
    theta_offset: float
    kind: str = REVOLUTE

    def __post_init__(self):
        if self.kind not in (REVOLUTE, PRISMATIC):
            raise RobotModelError(f"joint kind must be '{REVOLUTE}' or '{PRISMATIC}', got {self.kind!r}")
        for name in ("a", "alpha", "d", "theta_offset"):
            object.__setattr__(self, name, _num(getattr(self, name), f"dh.{name}"))


@dataclass(frozen=True)
class LinkInertia:
    """Aggregate inertial parameters of one link (plus optional rotor).

    `tensor` is the inertia tensor about the centre of mass in the link
    frame, row-major. It must be symmetric, positive semidefinite, and its
    principal moments must satisfy the triangle inequalities - anything
    else is not realizable by a mass distribution.
    """

    mass: float
    com: tuple[float, float, float]
    tensor: tuple[float, ...]  # 9 entries, row-major
    rotor_inertia: float = 0.0
    gear_ratio: float = 1.0

    def __post_init__(self):
        mass = _num(self.mass, "inertia.mass")
        if mass <= 0:
            raise RobotModelError(f"link mass must be positive, got {mass}")
        object.__setattr__(self, "mass", mass)
        object.__setattr__(self, "com", _vec(self.com, 3, "inertia.com"))
        tensor = _vec(self.tensor, 9, "inertia.tensor")
        t = np.array(tensor, dtype=float).reshape(3, 3)
        scale = max(1.0, float(np.abs(t).max()))
        if float(np.abs(t - t.T).max()) > _SYM_TOL * scale:
            raise RobotModelError("inertia tensor must be symmetric")
        t = 0.5 * (t + t.T)
        eig = np.linalg.eigvalsh(t)
        if eig[0] < -_EIG_TOL * scale:
            raise RobotModelError(
                f"inertia tensor must be positive semidefinite (eigenvalue {eig[0]:g})"
            )
        if eig[2] > eig[0] + eig[1] + _EIG_TOL * scale:
            raise RobotModelError(
                "inertia tensor violates the triangle inequality on principal moments "
                f"({eig[2]:g} > {eig[0]:g} + {eig[1]:g})"
            )
        object.__setattr__(self, "tensor", tuple(t.reshape(-1).tolist()))
        rotor = _num(self.rotor_inertia, "rotor.inertia")
        if rotor < 0:
            raise RobotModelError(f"rotor inertia must be non-negative, got {rotor}")
        object.__setattr__(self, "rotor_inertia", rotor)
        object.__setattr__(self, "gear_ratio", _num(self.gear_ratio, "rotor.gear_ratio"))


class ModelArrays(NamedTuple):
    """Packed, kernel-ready view of a model (read-only float64/int32)."""

    kinds: np.ndarray    # (dof,) int32, 0 revolute / 1 prismatic
    dh: np.ndarray       # (dof, 4) a, alpha, d, theta_offset
    mass: np.ndarray     # (dof,)
    com: np.ndarray      # (dof, 3)
    inertia: np.ndarray  # (dof, 3, 3)
    rotor: np.ndarray    # (dof,) gear_ratio^2 * rotor_inertia
    gravity: np.ndarray  # (3,)


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class RobotModel:
    """Immutable manipulator model: DH chain, inertial data, gravity vector."""

    def __init__(
        self,
        links: Sequence[tuple[DHLink, LinkInertia]],
        gravity: Sequence[float] = (0.0, 0.0, -9.81),
    ):
        links = tuple((dh, inertia) for dh, inertia in links)
        if len(links) < 1:
            raise RobotModelError("a manipulator needs at least one link")
        self._links = links
        self._gravity = _vec(gravity, 3, "gravity")
        dof = len(links)
        kinds = np.array(
            [0 if dh.kind == REVOLUTE else 1 for dh, _ in links], dtype=np.int32
        )
        dh_arr = np.array(
            [[dh.a, dh.alpha, dh.d, dh.theta_offset] for dh, _ in links], dtype=float
        )
        mass = np.array([li.mass for _, li in links], dtype=float)
        com = np.array([li.com for _, li in links], dtype=float)
        inertia = np.array([li.tensor for _, li in links], dtype=float).reshape(dof, 3, 3)
        rotor = np.array(
            [li.gear_ratio * li.gear_ratio * li.rotor_inertia for _, li in links], dtype=float
        )
        grav = np.array(self._gravity, dtype=float)
        self._arrays = ModelArrays(
            *(_readonly(a) for a in (kinds, dh_arr, mass, com, inertia, rotor, grav))
        )

    @property
    def links(self) -> tuple[tuple[DHLink, LinkInertia], ...]:
        return self._links

    @property
    def gravity(self) -> tuple[float, float, float]:
        return self._gravity

    @property
    def dof(self) -> int:
        return len(self._links)

    @property
    def arrays(self) -> ModelArrays:
        return self._arrays

    def __repr__(self):
        kinds = "".join("R" if dh.kind == REVOLUTE else "P" for dh, _ in self._links)
        return f"RobotModel({kinds}, gravity={self._gravity})"


@dataclass(frozen=True, eq=False)
class JointState:
    """Generalized coordinates and velocities at one instant."""

    q: np.ndarray
    qdot: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        qd = np.asarray(self.qdot, dtype=float)
        if q.shape != qd.shape or q.ndim != 1:
            raise ValueError(f"q and qdot must be 1-d and equal length, got {q.shape} / {qd.shape}")
        if not (np.isfinite(q).all() and np.isfinite(qd).all()):
            raise ValueError("joint state entries must be finite")
        object.__setattr__(self, "q", _readonly(q))
        object.__setattr__(self, "qdot", _readonly(qd))


# --- JSON model file --------------------------------------------------------

_TOP_KEYS = {"gravity", "links"}
_LINK_KEYS = {"dh", "inertia", "rotor"}
_DH_KEYS = {"a", "alpha", "d", "theta_offset", "kind"}
_INERTIA_KEYS = {"mass", "com", "tensor"}
_ROTOR_KEYS = {"inertia", "gear_ratio"}


def _strict(obj: Mapping, allowed: set[str], required: set[str], where: str) -> None:
    if not isinstance(obj, Mapping):
        raise RobotModelError(f"{where}: expected an object, got {type(obj).__name__}")
    unknown = set(obj) - allowed
    if unknown:
        raise RobotModelError(f"{where}: unknown field(s) {sorted(unknown)}")
    missing = required - set(obj)
    if missing:
        raise RobotModelError(f"{where}: missing required field '{sorted(missing)[0]}'")


def robot_model_from_dict(spec: Mapping) -> RobotModel:
    """Build a validated model from a parsed robot model file."""
    _strict(spec, _TOP_KEYS, _TOP_KEYS, "robot model")
    links = []
    for idx, link in enumerate(spec["links"]):
        where = f"links[{idx}]"
        _strict(link, _LINK_KEYS, {"dh", "inertia"}, where)
        dh_spec = link["dh"]
        _strict(dh_spec, _DH_KEYS, _DH_KEYS, f"{where}.dh")
        inertia_spec = link["inertia"]
        _strict(inertia_spec, _INERTIA_KEYS, _INERTIA_KEYS, f"{where}.inertia")
        rotor_inertia, gear_ratio = 0.0, 1.0
        if "rotor" in link:
            rotor_spec = link["rotor"]
            _strict(rotor_spec, _ROTOR_KEYS, _ROTOR_KEYS, f"{where}.rotor")
            rotor_inertia = rotor_spec["inertia"]
            gear_ratio = rotor_spec["gear_ratio"]
        try:
            dh = DHLink(
                a=dh_spec["a"],
                alpha=dh_spec["alpha"],
                d=dh_spec["d"],
                theta_offset=dh_spec["theta_offset"],
                kind=dh_spec["kind"],
            )
            inertia = LinkInertia(
                mass=inertia_spec["mass"],
                com=inertia_spec["com"],
                tensor=inertia_spec["tensor"],
                rotor_inertia=rotor_inertia,
                gear_ratio=gear_ratio,
            )
        except RobotModelError as exc:
            raise RobotModelError(f"{where}: {exc}") from exc
        links.append((dh, inertia))
    return RobotModel(links, gravity=_vec(spec["gravity"], 3, "gravity"))


def load_robot_model(path: str | Path) -> RobotModel:
    """Load and validate a robot model JSON file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except json.JSONDecodeError as exc:
        raise RobotModelError(
            f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return robot_model_from_dict(spec)
