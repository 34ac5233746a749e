"""Discrete-time simulator for material-flow networks of compartments.

A network couples vertex compartments (stocks) and arc compartments
(scheduled transfers) through impulse difference equations; simulating it
yields exact integer mass trajectories, the mass-flow matrix, conservation
checks and circularity indicators. The robot subpackage models the
manipulator doing the physical work as an energy compartment with full
joint-space dynamics and a first-law power audit.
"""

from . import robot
from .cell import cell_network
from .circularity import (
    IndicatorReport,
    indicator_report,
    is_thermodynamically_circular,
    separation_rate,
    separation_time,
)
from .errors import (
    FeasibilityError,
    InputError,
    MissingScheduleError,
    NegativeMassError,
    NetworkSpecError,
    NonFiniteStateError,
    RobotModelError,
    SingularInertiaError,
    TmnCellError,
    TrajectoryDataError,
    UnknownVertexError,
)
from .flow import (
    ConservationReport,
    Trajectory,
    TrajectoryTable,
    conservation_check,
    read_trajectory_csv,
    simulate,
    step,
    write_trajectory_csv,
)
from .glucorx import GlucoRxResult, build_glucorx_network, run_glucorx
from .network import (
    ArcCompartment,
    NetworkState,
    TMNetwork,
    TransferSchedule,
    VertexCompartment,
    build_network,
    initial_state,
    kronecker_delta,
    load_network,
    mass_flow_matrix,
    total_mass,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "TmnCellError",
    "InputError",
    "FeasibilityError",
    "NetworkSpecError",
    "UnknownVertexError",
    "TrajectoryDataError",
    "RobotModelError",
    "NegativeMassError",
    "MissingScheduleError",
    "SingularInertiaError",
    "NonFiniteStateError",
    "TransferSchedule",
    "VertexCompartment",
    "ArcCompartment",
    "TMNetwork",
    "NetworkState",
    "initial_state",
    "total_mass",
    "mass_flow_matrix",
    "kronecker_delta",
    "build_network",
    "load_network",
    "Trajectory",
    "TrajectoryTable",
    "ConservationReport",
    "step",
    "simulate",
    "conservation_check",
    "write_trajectory_csv",
    "read_trajectory_csv",
    "IndicatorReport",
    "separation_rate",
    "separation_time",
    "is_thermodynamically_circular",
    "indicator_report",
    "cell_network",
    "build_glucorx_network",
    "run_glucorx",
    "GlucoRxResult",
    "robot",
]
