"""Rigid-manipulator dynamics: the robot modeled as an energy compartment.

Joint-space equations of motion in standard form (inertia, Coriolis and
centrifugal, gravity), forward/inverse dynamics, fixed-step integration,
and a power-balance audit checking that the rate of change of mechanical
energy equals the mechanical power injected at the joints.
"""

from ._backend import backend_name
from .dynamics import (
    EnergyAudit,
    JointTrajectory,
    coriolis_terms,
    energy_audit,
    energy_series,
    forward_dynamics,
    forward_kinematics,
    gravity_compensation,
    gravity_vector,
    inertia_matrix,
    integrate,
    inverse_dynamics,
    kinetic_energy,
    lagrangian,
    potential_energy,
    power_residuals,
    sinusoidal_torque,
    write_joint_csv,
    zero_torque,
)
from .model import (
    PRISMATIC,
    REVOLUTE,
    DHLink,
    JointState,
    LinkInertia,
    RobotModel,
    load_robot_model,
    robot_model_from_dict,
)

__all__ = [
    "DHLink",
    "LinkInertia",
    "RobotModel",
    "JointState",
    "REVOLUTE",
    "PRISMATIC",
    "load_robot_model",
    "robot_model_from_dict",
    "backend_name",
    "forward_kinematics",
    "inertia_matrix",
    "coriolis_terms",
    "gravity_vector",
    "kinetic_energy",
    "potential_energy",
    "lagrangian",
    "inverse_dynamics",
    "forward_dynamics",
    "integrate",
    "JointTrajectory",
    "EnergyAudit",
    "energy_series",
    "power_residuals",
    "energy_audit",
    "write_joint_csv",
    "zero_torque",
    "gravity_compensation",
    "sinusoidal_torque",
]
