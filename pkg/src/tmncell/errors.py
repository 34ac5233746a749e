"""Exception taxonomy shared across the package.

Two families matter for the command line: input errors (malformed spec
files, unknown ids, unusable CSVs) map to exit code 1, feasibility errors
(a simulation or model that is structurally valid but cannot run) map to
exit code 2.
"""


class TmnCellError(Exception):
    """Base class for all package errors."""


class InputError(TmnCellError):
    """Invalid user input: spec files, ids, data files. CLI exit code 1."""


class FeasibilityError(TmnCellError):
    """Structurally valid input that cannot be executed. CLI exit code 2."""


class NetworkSpecError(InputError):
    """Network description violates the schema or a model invariant."""


class UnknownVertexError(InputError):
    """A vertex id does not exist in the network."""


class TrajectoryDataError(InputError):
    """A trajectory CSV is missing, malformed, or too short to use."""


class RobotModelError(InputError):
    """Robot model file violates the schema or an inertial-parameter check."""


class NegativeMassError(FeasibilityError):
    """A scheduled impulse would drive a stock or in-flight mass below zero."""

    def __init__(self, compartment_id: int, sample_index: int, message: str):
        super().__init__(message)
        self.compartment_id = compartment_id
        self.sample_index = sample_index


class MissingScheduleError(FeasibilityError):
    """The processor vertex lacks the in/out arcs the indicator needs."""


class SingularInertiaError(FeasibilityError):
    """Inertia matrix failed a positive-definite factorization."""


class NonFiniteStateError(FeasibilityError):
    """Integration produced NaN or infinity; the state diverged."""
