"""Built-in scenario: robotic disassembly of a GlucoRx HCT glucose meter.

A four-bin cell takes one device (61.8 g) from a stock of two and routes
its parts: casing to bin 1, PCB to bin 2, the five screws to bin 3 and
everything else to bin 4. Monitored at one-second samples; the device is
pulled from stock at n=5, reaches the line at n=30, and the four
disassembled fractions leave the line at n=240/300/320/360, each taking
5 samples to reach its bin. The run horizon of 400 gives margin past the
last arrival at 365.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cell import cell_network
from .circularity import IndicatorReport, indicator_report
from .errors import TmnCellError
from .flow import ConservationReport, Trajectory, conservation_check, simulate
from .network import TMNetwork

__all__ = [
    "PART_TABLE_MG",
    "DEVICE_MASS_MG",
    "GlucoRxResult",
    "bin_amounts_mg",
    "build_glucorx_network",
    "run_glucorx",
]

# (part name, mass in mg, bin index d, count per device)
PART_TABLE_MG: tuple[tuple[str, int, int, int], ...] = (
    ("front case", 14_400, 1, 1),
    ("back case", 17_200, 1, 1),
    ("PCB", 17_800, 2, 1),
    ("screw", 200, 3, 5),
    ("spring", 100, 4, 1),
    ("button and clip", 1_600, 4, 1),
    ("test strip port", 1_000, 4, 1),
    ("screen", 8_400, 4, 1),
    ("USB port cap", 300, 4, 1),
)

DEVICE_MASS_MG = 61_800
DEVICE_COUNT = 2

SAMPLE_TIME_S = 1.0
SOURCE_DEPARTS = 5
PROCESSOR_ARRIVES = 30
BIN_DEPARTS = (240, 300, 320, 360)
TRANSFER_SAMPLES = 5
HORIZON = 400

_BIN_LABELS = ("bin 1 (casing)", "bin 2 (PCB)", "bin 3 (screws)", "bin 4 (other parts)")
_BIN_MATERIALS = (("casing",), ("pcb",), ("screws",), ("mixed-parts",))


def bin_amounts_mg() -> tuple[int, ...]:
    """Per-bin masses from the part table, ascending by bin index."""
    totals = {d: 0 for d in range(1, 5)}
    for _, mass, d, count in PART_TABLE_MG:
        totals[d] += mass * count
    return tuple(totals[d] for d in range(1, 5))


def build_glucorx_network(initial_stock_mg: int | None = None) -> TMNetwork:
    """The 6-vertex, 5-arc disassembly cell with the scenario's schedules.

    The default stock holds both devices; only one is extracted, so the
    second sits untouched in vertex 1 for the whole run.
    """
    amounts = bin_amounts_mg()
    if sum(amounts) != DEVICE_MASS_MG:
        raise TmnCellError(
            f"part table inconsistent: bins sum to {sum(amounts)} mg, "
            f"device mass is {DEVICE_MASS_MG} mg"
        )
    if initial_stock_mg is None:
        initial_stock_mg = DEVICE_COUNT * DEVICE_MASS_MG
    return cell_network(
        amounts,
        SOURCE_DEPARTS,
        PROCESSOR_ARRIVES,
        BIN_DEPARTS,
        TRANSFER_SAMPLES,
        initial_stock_mg=initial_stock_mg,
        sample_time_s=SAMPLE_TIME_S,
        source_label="device stock",
        processor_label="disassembly line",
        bin_labels=_BIN_LABELS,
        source_materials=("glucose-meter",),
        bin_materials=_BIN_MATERIALS,
    )


@dataclass(frozen=True)
class GlucoRxResult:
    trajectory: Trajectory
    indicators: IndicatorReport
    conservation: ConservationReport


def run_glucorx() -> GlucoRxResult:
    """Simulate the scenario to n=400 and bundle indicators + conservation.

    Conservation is asserted here: the cell is closed, so a non-constant
    total would be an engine defect, not a modeling outcome.
    """
    net = build_glucorx_network()
    traj = simulate(net, HORIZON)
    report = conservation_check(traj)
    if not report.constant_total:
        raise TmnCellError("conservation violated in the glucose-meter scenario")
    indicators = indicator_report(net, processor_vertex=2, start=1)
    return GlucoRxResult(trajectory=traj, indicators=indicators, conservation=report)
