"""Joint-space manipulator dynamics and the mechanical power audit.

The equations of motion are written in the standard form

    B(q) qdd + c(q, qd) + g(q) = xi

with B the joint-space inertia matrix, c the Coriolis and centrifugal
terms built from Christoffel symbols of B, g the gravity torque and xi
the generalized forces. The heavy kernels live in a backend module
(compiled when available, numpy otherwise); this layer owns validation,
trajectory bookkeeping, energies and the first-law audit that checks
d(K + P)/dt against the injected power xi . qd along a trajectory.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from math import pi
from typing import Callable, NamedTuple, Sequence, Union

import numpy as np

from ..errors import NonFiniteStateError
from ._backend import kernel
from .model import JointState, RobotModel

# Step for the finite-difference Christoffel partials. Central differences
# leave an O(step^2) truncation error against an O(eps/step) rounding error;
# 1e-6 balances both at ~1e-10 relative for metre/kilogram-scale arms.
FD_STEP = 1e-6

TorqueProfile = Callable[[float, JointState], Union[np.ndarray, Sequence[float]]]


def _joint_vector(model: RobotModel, value, name: str) -> np.ndarray:
    arr = np.asarray(value, dtype=float)
    if arr.shape != (model.dof,):
        raise ValueError(f"{name} must have shape ({model.dof},), got {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} must be finite")
    return arr


class KinematicFrames(NamedTuple):
    """Base-frame pose of every joint frame and link centre of mass.

    Index 0 of rotations/origins is the base frame itself; entry i is the
    frame attached to link i. com_positions[i - 1] is the centre of mass
    of link i in base coordinates.
    """

    rotations: np.ndarray      # (dof + 1, 3, 3)
    origins: np.ndarray        # (dof + 1, 3)
    com_positions: np.ndarray  # (dof, 3)


def forward_kinematics(model: RobotModel, q) -> KinematicFrames:
    """Pose of every link frame for the configuration q."""
    q = _joint_vector(model, q, "q")
    a = model.arrays
    R, p, pc = kernel.frames(a.kinds, a.dh, a.com, q)
    return KinematicFrames(np.asarray(R), np.asarray(p), np.asarray(pc))


def inertia_matrix(model: RobotModel, q) -> np.ndarray:
    """Joint-space inertia matrix B(q), symmetric positive definite."""
    q = _joint_vector(model, q, "q")
    a = model.arrays
    return np.asarray(kernel.inertia_matrix(a.kinds, a.dh, a.mass, a.com,
                                            a.inertia, a.rotor, q))


def coriolis_terms(model: RobotModel, q, qdot) -> np.ndarray:
    """Coriolis and centrifugal forces c(q, qd), quadratic in qd."""
    q = _joint_vector(model, q, "q")
    qd = _joint_vector(model, qdot, "qdot")
    a = model.arrays
    return np.asarray(kernel.coriolis_vector(a.kinds, a.dh, a.mass, a.com,
                                             a.inertia, a.rotor, q, qd, FD_STEP))


def gravity_vector(model: RobotModel, q) -> np.ndarray:
    """Gravity forces g(q) = dP/dq."""
    q = _joint_vector(model, q, "q")
    a = model.arrays
    return np.asarray(kernel.gravity_vector(a.kinds, a.dh, a.mass, a.com,
                                            a.gravity, q))


def potential_energy(model: RobotModel, q) -> float:
    q = _joint_vector(model, q, "q")
    a = model.arrays
    return float(kernel.potential_energy(a.kinds, a.dh, a.mass, a.com,
                                         a.gravity, q))


def kinetic_energy(model: RobotModel, q, qdot) -> float:
    """K = 0.5 qd . B(q) qd."""
    qd = _joint_vector(model, qdot, "qdot")
    return float(0.5 * qd @ inertia_matrix(model, q) @ qd)


def lagrangian(model: RobotModel, q, qdot) -> float:
    return kinetic_energy(model, q, qdot) - potential_energy(model, q)


def inverse_dynamics(model: RobotModel, q, qdot, qddot) -> np.ndarray:
    """Generalized forces realizing the acceleration: xi = B qdd + c + g."""
    qdd = _joint_vector(model, qddot, "qddot")
    return (inertia_matrix(model, q) @ qdd
            + coriolis_terms(model, q, qdot)
            + gravity_vector(model, q))


def forward_dynamics(model: RobotModel, q, qdot, forces) -> np.ndarray:
    """Acceleration under the given generalized forces: qdd = B^-1 (xi - c - g)."""
    q = _joint_vector(model, q, "q")
    qd = _joint_vector(model, qdot, "qdot")
    xi = _joint_vector(model, forces, "forces")
    a = model.arrays
    return np.asarray(kernel.forward_dynamics(a.kinds, a.dh, a.mass, a.com,
                                              a.inertia, a.rotor, a.gravity,
                                              q, qd, xi, FD_STEP))


# --- integration -------------------------------------------------------------


@dataclass(frozen=True)
class JointTrajectory:
    """Fixed-step joint trajectory with the applied forces at each sample."""

    t: np.ndarray    # (n,)
    q: np.ndarray    # (n, dof)
    qdot: np.ndarray  # (n, dof)
    xi: np.ndarray   # (n, dof), forces evaluated at the sample points
    dt: float

    @property
    def n_samples(self) -> int:
        return self.t.shape[0]

    @property
    def dof(self) -> int:
        return self.q.shape[1]

    def state(self, k: int) -> JointState:
        return JointState(self.q[k].copy(), self.qdot[k].copy())


def integrate(model: RobotModel, initial: JointState, torque_profile: TorqueProfile,
              dt: float, duration: float) -> JointTrajectory:
    """Integrate the forward dynamics with the classical Runge-Kutta scheme.

    torque_profile(t, state) is evaluated at every integration stage and
    must return the generalized forces, shape (dof,). The trajectory holds
    nsteps + 1 samples with nsteps = round(duration / dt).
    """
    dt = float(dt)
    duration = float(duration)
    if not (np.isfinite(dt) and dt > 0.0):
        raise ValueError(f"dt must be positive and finite, got {dt}")
    nsteps = int(round(duration / dt))
    if nsteps < 1:
        raise ValueError(f"duration {duration} must cover at least one step of dt={dt}")
    q0 = _joint_vector(model, initial.q, "initial.q")
    qd0 = _joint_vector(model, initial.qdot, "initial.qdot")
    dof = model.dof

    def callback(t, q, qd):
        # Stage states can blow up before the integrator's own check runs.
        if not (np.isfinite(q).all() and np.isfinite(qd).all()):
            raise NonFiniteStateError(f"state diverged at t={t:g} s")
        out = np.asarray(torque_profile(t, JointState(q, qd)), dtype=float)
        if out.shape != (dof,):
            raise ValueError(f"torque profile must return shape ({dof},), got {out.shape}")
        return out

    a = model.arrays
    qs, qds, xis = kernel.rk4_integrate(a.kinds, a.dh, a.mass, a.com, a.inertia,
                                        a.rotor, a.gravity, q0, qd0, callback,
                                        dt, nsteps, FD_STEP)
    t = np.arange(nsteps + 1, dtype=float) * dt
    return JointTrajectory(t=t, q=np.asarray(qs), qdot=np.asarray(qds),
                           xi=np.asarray(xis), dt=dt)


# --- energy audit ------------------------------------------------------------


class EnergySeries(NamedTuple):
    kinetic: np.ndarray
    potential: np.ndarray
    total: np.ndarray


def energy_series(model: RobotModel, trajectory: JointTrajectory) -> EnergySeries:
    """Kinetic, potential and total mechanical energy at every sample."""
    n = trajectory.n_samples
    K = np.empty(n)
    P = np.empty(n)
    for k in range(n):
        K[k] = kinetic_energy(model, trajectory.q[k], trajectory.qdot[k])
        P[k] = potential_energy(model, trajectory.q[k])
    return EnergySeries(K, P, K + P)


def _time_derivative(values: np.ndarray, dt: float) -> np.ndarray:
    """Second-order differences: central inside, one-sided at the ends."""
    n = values.shape[0]
    out = np.empty(n)
    if n < 3:
        out[:] = (values[-1] - values[0]) / dt
        return out
    out[1:-1] = (values[2:] - values[:-2]) / (2.0 * dt)
    # difference-first forms of the one-sided stencils: exactly zero for a
    # constant series, where -3v0 + 4v1 - v2 leaves an ulp of rounding
    out[0] = (4.0 * (values[1] - values[0]) - (values[2] - values[0])) / (2.0 * dt)
    out[-1] = (4.0 * (values[-1] - values[-2]) - (values[-1] - values[-3])) / (2.0 * dt)
    return out


def power_residuals(model: RobotModel, trajectory: JointTrajectory) -> np.ndarray:
    """Signed residual dE/dt - xi . qd at every sample, in watts.

    Zero for an exact trajectory of the model; the finite-difference dE/dt
    limits how small the residual can get in practice.
    """
    if trajectory.n_samples < 2:
        raise ValueError("power residuals need at least two samples")
    energy = energy_series(model, trajectory)
    dEdt = _time_derivative(energy.total, trajectory.dt)
    injected = np.einsum("ij,ij->i", trajectory.xi, trajectory.qdot)
    return dEdt - injected


@dataclass(frozen=True)
class EnergyAudit:
    """Outcome of the first-law check along a trajectory."""

    max_residual_w: float
    power_scale_w: float
    rtol: float
    balanced: bool

    def to_json_dict(self) -> dict:
        return {
            "max_residual_W": self.max_residual_w,
            "power_scale_W": self.power_scale_w,
            "rtol": self.rtol,
            "balanced": self.balanced,
        }


def energy_audit(model: RobotModel, trajectory: JointTrajectory,
                 rtol: float = 1e-5) -> EnergyAudit:
    """Check d(K + P)/dt == xi . qd to a relative tolerance.

    The residual is compared against a power scale formed from the peak
    injected power, the peak energy rate and the energy swing over the run,
    so the test stays meaningful for passive (zero-power) trajectories.
    """
    if not (np.isfinite(rtol) and rtol > 0.0):
        raise ValueError(f"rtol must be positive and finite, got {rtol}")
    energy = energy_series(model, trajectory)
    residual = power_residuals(model, trajectory)
    dEdt = _time_derivative(energy.total, trajectory.dt)
    injected = np.einsum("ij,ij->i", trajectory.xi, trajectory.qdot)
    duration = float(trajectory.t[-1] - trajectory.t[0])
    swing = float(energy.total.max() - energy.total.min() + energy.kinetic.max())
    scale = max(
        float(np.abs(injected).max()),
        float(np.abs(dEdt).max()),
        swing / duration,
        1e-12,
    )
    max_residual = float(np.abs(residual).max())
    return EnergyAudit(
        max_residual_w=max_residual,
        power_scale_w=scale,
        rtol=float(rtol),
        balanced=max_residual <= rtol * scale,
    )


# --- trajectory file ---------------------------------------------------------


def write_joint_csv(path, model: RobotModel, trajectory: JointTrajectory) -> None:
    """Write t, joint coordinates/velocities/forces, energies and residual.

    Columns: t, q_1..q_dof, qd_1..qd_dof, xi_1..xi_dof, K, P, E, residual_W.
    Values are emitted with repr-level precision so reruns are byte-identical.
    """
    dof = trajectory.dof
    energy = energy_series(model, trajectory)
    residual = power_residuals(model, trajectory)
    header = (["t"]
              + [f"q_{i}" for i in range(1, dof + 1)]
              + [f"qd_{i}" for i in range(1, dof + 1)]
              + [f"xi_{i}" for i in range(1, dof + 1)]
              + ["K", "P", "E", "residual_W"])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for k in range(trajectory.n_samples):
            row = [format(trajectory.t[k], ".17g")]
            row += [format(v, ".17g") for v in trajectory.q[k]]
            row += [format(v, ".17g") for v in trajectory.qdot[k]]
            row += [format(v, ".17g") for v in trajectory.xi[k]]
            row += [format(energy.kinetic[k], ".17g"),
                    format(energy.potential[k], ".17g"),
                    format(energy.total[k], ".17g"),
                    format(residual[k], ".17g")]
            writer.writerow(row)


# --- force profiles ----------------------------------------------------------


def zero_torque() -> TorqueProfile:
    """Passive motion: no generalized forces."""
    def profile(t: float, state: JointState) -> np.ndarray:
        return np.zeros_like(state.q)
    return profile


def gravity_compensation(model: RobotModel) -> TorqueProfile:
    """Forces cancelling gravity exactly at every configuration."""
    def profile(t: float, state: JointState) -> np.ndarray:
        return gravity_vector(model, state.q)
    return profile


def sinusoidal_torque(amplitude: float, frequency_hz: float) -> TorqueProfile:
    """Sinusoidal drive, joint i shifted by i * pi/2 so joints run out of step."""
    amplitude = float(amplitude)
    frequency_hz = float(frequency_hz)
    if not (np.isfinite(amplitude) and np.isfinite(frequency_hz)):
        raise ValueError("amplitude and frequency must be finite")
    omega = 2.0 * pi * frequency_hz

    def profile(t: float, state: JointState) -> np.ndarray:
        phase = omega * t + 0.5 * pi * np.arange(state.q.shape[0])
        return amplitude * np.sin(phase)
    return profile
