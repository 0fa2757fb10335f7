"""Row-wise vs column-wise error detection on a row-linked grid.

Both passes run on the same lattice under the same fault plan:

* row pass: each row folds along its row links into the last column,
  then the last column folds the row results down to the sink;
* column pass: each branch folds into its head, then the backbone folds
  the heads into the sink.

A failed node loses its reading in both passes but still relays, since
the lattice always offers a way around it.  A failed link drops whatever
partial crosses it, and only the pass routed over that link sees the
loss.  Differing results mean an error happened somewhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Set, Tuple

from .errors import NonAssociativeSpec, NotALattice
from .fusion import FusionSpec, Reading
from .sim import NO_FAULTS, FaultPlan, NodeState, check_readings, execute
from .topology import GridTopology, Link, NodeId, link


class Verdict(str, Enum):
    NO_MISMATCH = "NoMismatch"
    DETECTED = "Detected"


@dataclass(frozen=True)
class DetectionReport:
    row_result: Optional[Reading]
    column_result: Optional[Reading]
    verdict: Verdict
    row_partials: Tuple[Optional[Reading], ...]
    column_partials: Tuple[Optional[Reading], ...]

    def to_dict(self) -> dict:
        s = lambda v: None if v is None else str(v)  # noqa: E731
        return {
            "row_result": s(self.row_result),
            "column_result": s(self.column_result),
            "verdict": self.verdict.value,
            "row_partials": [s(v) for v in self.row_partials],
            "column_partials": [s(v) for v in self.column_partials],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _check_lattice(grid: GridTopology) -> None:
    if not grid.params.row_links:
        raise NotALattice("detection needs a grid with row links")
    rows, cols = grid.n_rows, grid.n_cols
    if any(len(chain) != rows for chain in grid.branches):
        raise NotALattice("branches have unequal lengths")
    if len(grid.row_links) != (cols - 1) * rows:
        raise NotALattice(f"expected {(cols - 1) * rows} row links, found {len(grid.row_links)}")
    for a, b in grid.row_links:
        (ba, da), (bb, db) = grid.position(a), grid.position(b)
        if da != db or abs(ba - bb) != 1:
            raise NotALattice(f"row link {a}-{b} does not join same-depth neighbours")


def _chain_stage(
    chains: List[List[NodeId]],
    states: Dict[NodeId, NodeState],
    spec: FusionSpec,
    dead: frozenset,
) -> List[NodeState]:
    """Fold each chain into its last node; a dead hop loses the partial."""
    routes: Dict[NodeId, Optional[NodeId]] = {}
    roots: Set[NodeId] = set()
    for chain in chains:
        for a, b in zip(chain, chain[1:]):
            routes[a] = None if link(a, b) in dead else b
        routes[chain[-1]] = None
        roots.add(chain[-1])
    execute(routes, roots, states, spec, strict=True)
    return [states[chain[-1]] for chain in chains]


def _finish(spec: FusionSpec, state: NodeState) -> Optional[Reading]:
    if state.own is None:
        return spec.identity
    return spec.finish(state.own)


def _pass(
    lines: List[List[NodeId]],
    collector: List[NodeId],
    lifted: Mapping[NodeId, Any],
    spec: FusionSpec,
    dead: frozenset,
) -> Tuple[Optional[Reading], Tuple[Optional[Reading], ...]]:
    states = {n: NodeState(own=v) for n, v in lifted.items()}
    line_states = _chain_stage(lines, states, spec, dead)
    partials = tuple(_finish(spec, s) for s in line_states)
    (final,) = _chain_stage([collector], states, spec, dead)
    return _finish(spec, final), partials


def detect(
    grid: GridTopology,
    spec: FusionSpec,
    readings: Mapping[NodeId, Any],
    faults: FaultPlan = NO_FAULTS,
    *,
    trial: int = 0,
) -> DetectionReport:
    _check_lattice(grid)
    if not spec.is_ac:
        raise NonAssociativeSpec(f"{spec.name} is not flagged associative and commutative")
    values = check_readings(list(grid.nodes), readings, grid.nodes)
    failed = faults.resolve_nodes(grid.nodes, trial)
    dead: frozenset = faults.failed_links
    lifted = {n: (None if n in failed else spec.lift(n, v)) for n, v in values.items()}

    rows, cols = grid.n_rows, grid.n_cols
    last = cols - 1
    # rows run branch 0 -> last branch; collectors run leaf -> head down the last branch
    row_lines = [[grid.node_at(b, d) for b in range(cols)] for d in range(rows)]
    row_collect = [grid.node_at(last, d) for d in range(rows - 1, -1, -1)]
    col_lines = [list(reversed(chain)) for chain in grid.branches]
    col_collect = list(grid.backbone)

    row_result, row_partials = _pass(row_lines, row_collect, lifted, spec, dead)
    col_result, col_partials = _pass(col_lines, col_collect, lifted, spec, dead)
    verdict = Verdict.DETECTED if row_result != col_result else Verdict.NO_MISMATCH
    return DetectionReport(row_result, col_result, verdict, row_partials, col_partials)


def pass_links(grid: GridTopology) -> Dict[str, frozenset]:
    """Physical links used by each pass, for callers planning link faults."""
    rows, cols = grid.n_rows, grid.n_cols
    last = cols - 1
    row: Set[Link] = {link(a, b) for a, b in grid.row_links}
    row |= {link(grid.node_at(last, d), grid.node_at(last, d - 1)) for d in range(1, rows)}
    column: Set[Link] = {link(a, b) for a, b in grid.combine_links}
    return {"row": frozenset(row), "column": frozenset(column)}
