"""Source / processor / D-bin cell layout.

The layout shared by disassembly and waste-sorting setups: vertex 1 is a
stock of incoming products, vertex 2 the processing line, vertices 3..2+D
the output bins. One arc feeds the line from the stock and one arc serves
each bin, giving n_v = 2+D, n_a = 1+D, n_c = 3+2D. Arc ids continue after
the vertex ids, so the feed arc is 3+D and the bin arc for bin d is 3+D+d.
"""

from __future__ import annotations

from typing import Sequence

from .errors import NetworkSpecError
from .network import ArcCompartment, TMNetwork, TransferSchedule, VertexCompartment

__all__ = ["cell_network"]


def cell_network(
    bin_amounts_mg: Sequence[int],
    source_departs: int,
    processor_arrives: int,
    bin_departs: Sequence[int],
    transfer_samples: int = 5,
    *,
    initial_stock_mg: int | None = None,
    sample_time_s: float = 1.0,
    source_label: str = "stock",
    processor_label: str = "processing line",
    bin_labels: Sequence[str] | None = None,
    source_materials: Sequence[str] = (),
    bin_materials: Sequence[Sequence[str]] | None = None,
) -> TMNetwork:
    """Build the cell digraph for D = len(bin_amounts_mg) bins.

    The feed arc carries sum(bin_amounts_mg) from the stock, departing at
    `source_departs` and arriving at the line at `processor_arrives`; bin d
    (1-based) receives bin_amounts_mg[d-1], departing the line at
    bin_departs[d-1] and arriving transfer_samples later. The default
    initial stock is exactly one batch.
    """
    n_bins = len(bin_amounts_mg)
    if n_bins == 0:
        raise NetworkSpecError("cell layout needs at least one bin")
    if len(bin_departs) != n_bins:
        raise NetworkSpecError(
            f"expected {n_bins} bin departure times, got {len(bin_departs)}"
        )
    batch_mg = sum(bin_amounts_mg)
    if initial_stock_mg is None:
        initial_stock_mg = batch_mg
    if bin_labels is None:
        bin_labels = [f"bin {d}" for d in range(1, n_bins + 1)]
    if bin_materials is None:
        bin_materials = [() for _ in range(n_bins)]

    src_mats = tuple(source_materials)
    vertices = [
        VertexCompartment(1, source_label, frozenset(src_mats), initial_stock_mg),
        VertexCompartment(2, processor_label, frozenset(src_mats), 0),
    ]
    for d in range(1, n_bins + 1):
        vertices.append(
            VertexCompartment(2 + d, bin_labels[d - 1], frozenset(bin_materials[d - 1]), 0)
        )

    feed_arc_id = 3 + n_bins  # first id after the vertices
    arcs = [
        ArcCompartment(
            id=feed_arc_id,
            tail=1,
            head=2,
            schedule=TransferSchedule(batch_mg, source_departs, processor_arrives),
            materials=frozenset(src_mats),
        )
    ]
    for d in range(1, n_bins + 1):
        departs = bin_departs[d - 1]
        arcs.append(
            ArcCompartment(
                id=feed_arc_id + d,
                tail=2,
                head=2 + d,
                schedule=TransferSchedule(bin_amounts_mg[d - 1], departs, departs + transfer_samples),
                materials=frozenset(bin_materials[d - 1]),
            )
        )
    return TMNetwork(vertices, arcs, sample_time_s)
